from .error_handlers import api_errors, cli_errors

__all__ = ['api_errors', 'cli_errors']
