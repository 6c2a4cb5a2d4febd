"""Flask application: /score, /advantages, /health."""

from __future__ import annotations

import logging
import signal
from typing import Optional

from flask import Flask, jsonify, request
from werkzeug.exceptions import HTTPException
from werkzeug.serving import make_server

from src.config import VERSION
from src.errors import MalformedRequestError
from src.reward_service.handlers import group_advantages, parse_request, score_batch
from src.reward_service.models import AdvantageRequest, RewardRequest, ServiceSettings

logger = logging.getLogger(__name__)


def create_app(settings: Optional[ServiceSettings] = None) -> Flask:
    settings = settings or ServiceSettings()
    normalizer = settings.normalizer

    app = Flask(__name__)
    app.config["MAX_CONTENT_LENGTH"] = settings.max_payload_bytes
    app.json.sort_keys = False
    app.extensions["ras_settings"] = settings

    def _body():
        payload = request.get_json(silent=True)
        if payload is None:
            raise MalformedRequestError("request body must be valid JSON")
        return payload

    @app.post("/score")
    def score():
        req = parse_request(RewardRequest, _body())
        if len(req.items) > settings.max_batch_items:
            raise MalformedRequestError(
                f"batch has {len(req.items)} items, limit is {settings.max_batch_items}"
            )
        results = score_batch(req, settings.default_alpha, normalizer)
        alpha = req.alpha if req.alpha is not None else settings.default_alpha
        return jsonify({"alpha": alpha, "results": results})

    @app.post("/advantages")
    def advantages():
        req = parse_request(AdvantageRequest, _body())
        return jsonify({"groups": group_advantages(req)})

    @app.get("/health")
    def health():
        return jsonify({
            "status": "ok",
            "version": VERSION,
            "default_alpha": settings.default_alpha,
        })

    @app.errorhandler(MalformedRequestError)
    def malformed(e: MalformedRequestError):
        return jsonify({"error": type(e).__name__, "detail": str(e)}), 400

    @app.errorhandler(HTTPException)
    def http_error(e: HTTPException):
        return jsonify({"error": e.name, "detail": e.description}), e.code

    return app


def serve(settings: Optional[ServiceSettings] = None) -> None:
    """Run a threaded server until interrupted (Ctrl-C or SIGTERM)."""
    settings = settings or ServiceSettings()
    app = create_app(settings)
    server = make_server(settings.host, settings.port, app, threaded=True)

    def _terminate(signum, frame):
        raise KeyboardInterrupt

    previous = signal.signal(signal.SIGTERM, _terminate)
    logger.info(
        "Serving on http://%s:%d (alpha=%.4f)",
        settings.host, server.server_port, settings.default_alpha,
    )
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        logger.info("Shutting down")
    finally:
        server.server_close()
        signal.signal(signal.SIGTERM, previous)
