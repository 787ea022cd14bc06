# src/decorators/error_handlers.py
import logging
from functools import wraps

import click
from flask import jsonify

from ..models.errors import ConfigError, ResultsWriteError

logger = logging.getLogger(__name__)

EXIT_CONFIG_ERROR = 2
EXIT_WRITE_ERROR = 3


def cli_errors(f=None, config_code=EXIT_CONFIG_ERROR, write_code=EXIT_WRITE_ERROR):
    """Turn configuration errors into exit code 2 and write failures into exit code 3."""
    def decorator(f):
        @wraps(f)
        def decorated_function(*args, **kwargs):
            try:
                return f(*args, **kwargs)
            except ConfigError as e:
                logger.debug(f"configuration error in {f.__name__}: {e}")
                click.echo(f"error: {e}", err=True)
                raise SystemExit(config_code)
            except ResultsWriteError as e:
                logger.error(f"write failure in {f.__name__}: {e}")
                click.echo(f"error: {e}", err=True)
                raise SystemExit(write_code)

        return decorated_function

    if f is None:
        return decorator
    return decorator(f)


def api_errors(f):
    """JSON error bodies: 400 for configuration errors, 500 for write failures."""
    @wraps(f)
    def decorated_function(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except ConfigError as e:
            return jsonify({'error': str(e), 'key': e.key}), 400
        except ResultsWriteError as e:
            logger.error(f"Error in {f.__name__}: {e}")
            return jsonify({'error': str(e)}), 500

    return decorated_function
