# src/views/api_views.py
import logging

from flask import Blueprint, jsonify, request

from config import Config
from ..controllers import ConfigController, ExperimentController
from ..decorators.error_handlers import api_errors
from ..models import ConfigError
from ..services import SeedStream, bound_service, estimator_service

logger = logging.getLogger(__name__)

api_bp = Blueprint('api_views', __name__, url_prefix='/api')


def _json_body():
    body = request.get_json(silent=True)
    if not isinstance(body, dict):
        raise ConfigError("expected a JSON object body", key='body')
    return body


def _config_from_body(body):
    """(config, bound report or None, delta) from a JSON body in config or theorem form."""
    delta = ConfigController.parse_number(body.get('delta', 1.0), 'delta')
    if 'theorem' in body:
        config, report = bound_service.theorem_config(
            body['theorem'],
            ConfigController.parse_number(body.get('n'), 'n', integer=True),
            delta,
            body.get('mech', 'tournament'),
            chi=ConfigController.parse_number(body.get('chi', 1.0), 'chi'),
            pc=ConfigController.parse_number(body.get('pc', 0.0), 'pc'),
            seed=ConfigController.parse_number(body.get('seed', 0), 'seed', integer=True),
            replicates=ConfigController.parse_number(body.get('replicates', 1), 'replicates', integer=True),
            max_evals=ConfigController.parse_number(body['max_evals'], 'max_evals', integer=True)
            if 'max_evals' in body else None,
        )
        return config, report, report.delta
    options = {key: body[key] for key in body if key not in ('delta', 'population_levels', 'trials', 'report')}
    return ConfigController.parse_config(options, delta=delta), None, delta


@api_bp.route('/bound', methods=['GET'])
@api_errors
def bound():
    args = request.args
    theorem = args.get('theorem')
    if not theorem:
        raise ConfigError("query parameter 'theorem' is required", key='theorem')
    config, report = bound_service.theorem_config(
        theorem,
        ConfigController.parse_number(args.get('n', ''), 'n', integer=True),
        ConfigController.parse_number(args.get('delta', 1.0), 'delta'),
        args.get('mech', 'tournament'),
        chi=ConfigController.parse_number(args.get('chi', 1.0), 'chi'),
        pc=ConfigController.parse_number(args.get('pc', 0.0), 'pc'),
    )
    record = report.to_dict()
    record.update(config.to_dict())
    return jsonify(record)


@api_bp.route('/verify', methods=['POST'])
@api_errors
def verify():
    body = _json_body()
    config, _, delta = _config_from_body(body)
    levels = body.get('population_levels')
    report = estimator_service.condition_report(config, delta, trials=body.get('trials'),
                                                rng=SeedStream(config.seed).generation(0),
                                                population_levels=levels)
    record = report.to_dict()
    record['delta'] = delta
    record.update(config.to_dict())
    return jsonify(record)


@api_bp.route('/run', methods=['POST'])
@api_errors
def run():
    body = _json_body()
    config, bound_report, delta = _config_from_body(body)
    if config.max_evals > Config.API_MAX_EVALS:
        raise ConfigError(f"budget {config.max_evals} exceeds the API limit {Config.API_MAX_EVALS}",
                          key='max_evals')
    stats = ExperimentController.run_replicates(config, workers=1)
    if body.get('report'):
        return jsonify(ExperimentController.bound_vs_empirical_report(
            config, delta, stats, bound_report=bound_report or bound_service.config_bound(config, delta)))
    return jsonify(stats.to_dict())
