"""
Trap Integrability Audit
Exact symbolic-numeric audit of the integrability of the trapped-ion Hamiltonian.
"""

__version__ = "1.0.0"
__author__ = "Trap Dynamics Team"
