"""
Utilities module - Configuration, logging and error types shared by all modules.
"""

from .config_loader import load_config, validate_config
from .logger import setup_logger, get_logger
from .errors import AuditError, ParseError

__all__ = ['load_config', 'validate_config', 'setup_logger', 'get_logger',
           'AuditError', 'ParseError']
