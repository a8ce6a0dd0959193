"""Main Flask application for the entropy report service.

This module provides a small web server with health check endpoints and
read-only entropy endpoints that return the same json documents the
command line writes with `--format json`.
"""

import json
import logging

from flask import Flask, jsonify, request

import config
from config import RunConfig
from handlers.command_handlers import cmd_entropy_cover, cmd_entropy_finite, load_subject
from utils.errors import EntropyError
from utils.formatting import format_json

# Set up logging
logger = logging.getLogger(__name__)

app = Flask(__name__)


def _error(message: str):
    return jsonify({"status": "error", "message": message}), 400


def _horizon() -> int:
    """The requested horizon, capped at config.SERVICE_N_MAX."""
    n_max = request.args.get("nmax", default=config.DEFAULT_N_MAX, type=int)
    if n_max > config.SERVICE_N_MAX:
        logger.warning(f"Requested nmax={n_max} capped at {config.SERVICE_N_MAX}")
        return config.SERVICE_N_MAX
    return n_max


def _document_response(document: dict, code: int):
    body = json.loads(format_json(document))
    body["status"] = "ok" if code == 0 else "disagreement"
    body["exit_code"] = code
    return jsonify(body)


@app.route('/')
def home():
    """Home endpoint that returns a status message.

    Returns:
        JSON response with status information
    """
    return jsonify({
        "message": "drentropy report service is running",
        "status": "ok"
    })


@app.route('/health')
def health():
    """Health check endpoint.

    Returns:
        JSON response with health status
    """
    return jsonify({"status": "healthy"})


@app.route('/entropy/finite/<spec>')
def entropy_finite(spec: str):
    """Finite-graph entropy of a built-in spec by both pipelines.

    Returns:
        JSON report document, or an error document with HTTP 400
    """
    try:
        n_max = _horizon()
        document, code = cmd_entropy_finite(load_subject(spec), RunConfig(n_max=n_max))
    except (EntropyError, ValueError) as e:
        logger.error(f"Error computing finite entropy of {spec}: {str(e)}")
        return _error(str(e))
    return _document_response(document, code)


@app.route('/entropy/cover/<spec>')
def entropy_cover(spec: str):
    """Cover entropy of a renewal cover or a finite word cover.

    Returns:
        JSON report document, or an error document with HTTP 400
    """
    try:
        n_max = _horizon()
        depth = request.args.get("depth", default=1, type=int)
        document, code = cmd_entropy_cover(spec, RunConfig(n_max=n_max), depth=depth)
    except (EntropyError, ValueError) as e:
        logger.error(f"Error computing cover entropy of {spec}: {str(e)}")
        return _error(str(e))
    return _document_response(document, code)


if __name__ == '__main__':
    app.run(host='0.0.0.0', port=5000)
