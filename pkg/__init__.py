"""
kbsim - logical similarity analysis for declarative knowledge bases
"""

from config import CliConfig, parse_cli_args
from src import __version__

__all__ = ["CliConfig", "parse_cli_args", "__version__"]
