from .api_views import api_bp
from .cli_views import cli

__all__ = ['api_bp', 'cli']
