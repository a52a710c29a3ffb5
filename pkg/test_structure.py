"""
Quick Test Script - Verify Package Structure
Tests that every audit module imports and that the configuration loads.
"""

import sys
from pathlib import Path

# Add src directory to path
src_path = Path(__file__).parent / "src"
sys.path.insert(0, str(src_path))


def test_imports():
    """Test that all modules can be imported."""
    print("🧪 Testing Module Imports...\n")

    print("├── Testing exact core...")
    from exactnum import QuadExt, berger_independent, parse_rational
    from fuchsian import FuchsODE, frobenius_expand, residue_at
    print("│   ✅ exactnum and fuchsian imported successfully")

    print("├── Testing variational equations...")
    from ve import TrapParams, build_nve, lame_reduce, ve2_sources
    print("│   ✅ ve imported successfully")

    print("├── Testing classifier...")
    from classifier import Certificate, Verdict, classify
    print("│   ✅ classifier imported successfully")

    print("├── Testing numerics and reporters...")
    from numerics import contour_residue, integrate_flow, poincare_section
    from reporters import AuditReport, JsonLinesWriter
    print("│   ✅ numerics and reporters imported successfully")

    print("├── Testing utilities...")
    from utils.config_loader import load_config, validate_config
    from utils.logger import setup_logger
    print("│   ✅ Utilities imported successfully")

    print("└── Testing pipeline...")
    from audit_pipeline import AuditPipeline, main
    print("    ✅ Pipeline imported successfully")

    print("\n✅ All modules imported successfully!\n")


def test_config():
    """Test configuration loading."""
    print("🧪 Testing Configuration Loading...\n")

    from utils.config_loader import (
        get_contour_settings,
        get_truncation_order,
        load_config,
        validate_config,
    )

    print("├── Loading config/config.json...")
    config = load_config()
    print("│   ✅ Configuration loaded")

    print("├── Validating configuration...")
    assert validate_config(config)
    print("│   ✅ Configuration valid")

    assert get_truncation_order(config) == 12
    assert get_contour_settings(config)["contour_nodes"] >= 64
    print("└── Configuration test complete")
    print("\n✅ Configuration system working!\n")


def test_invalid_config_lists_every_problem():
    import pytest
    from utils.config_loader import DEFAULT_CONFIG, validate_config

    broken = {key: dict(value) for key, value in DEFAULT_CONFIG.items()}
    broken["series"]["truncation_order"] = 2
    broken["numerics"]["contour_nodes"] = 16
    with pytest.raises(ValueError) as excinfo:
        validate_config(broken)
    assert "truncation_order" in str(excinfo.value)
    assert "contour_nodes" in str(excinfo.value)


def main():
    """Run all tests."""
    print("=" * 60)
    print("🔧 Project Structure Verification")
    print("=" * 60)
    print()

    results = []
    for check in (test_imports, test_config):
        try:
            check()
            results.append(True)
        except Exception as e:
            print(f"\n❌ {check.__name__} failed: {e}")
            results.append(False)

    # Summary
    print("=" * 60)
    if all(results):
        print("✅ ALL TESTS PASSED - Structure is ready to use!")
    else:
        print("⚠️  SOME TESTS FAILED - Check errors above")
    print("=" * 60)

    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main())
