#!/usr/bin/env python3
"""
Drone/Bird classification service

Serves a trained model file over HTTP:
1. GET  /health        service status and model kind
2. GET  /api/model     run configuration stored with the model
3. POST /api/classify  classify an uploaded PGM/PPM image (field `image`)
"""

import logging
import os
import sys

from flask import Flask, jsonify, request
from flask_cors import CORS
from werkzeug.utils import secure_filename

# Add module paths
sys.path.append(os.path.join(os.path.dirname(__file__), 'modules'))

from common.errors import AvdbError  # noqa: E402
from config import settings  # noqa: E402
from imagecore import decode_image  # noqa: E402
from pipeline import Classifier, classify_image, load_model  # noqa: E402

logger = logging.getLogger(__name__)


class DroneBirdApp:
    def __init__(self, model_file=None, classifier: Classifier = None):
        self.app = Flask(__name__)
        CORS(self.app)

        # Uploads are single small frames
        self.app.config['MAX_CONTENT_LENGTH'] = 16 * 1024 * 1024  # 16MB

        self.model_file = str(model_file) if model_file else None
        self.classifier = classifier
        if self.classifier is None and self.model_file:
            self.classifier = load_model(self.model_file)
            logger.info(f"Loaded {self.classifier.kind} model from {self.model_file}")

        self._setup_routes()

    @property
    def model_available(self) -> bool:
        return self.classifier is not None

    def _setup_routes(self):
        """Setup all API routes"""
        @self.app.route('/health')
        def health():
            return jsonify({
                'status': 'ok',
                'model': self.classifier.kind if self.model_available else None,
            })

        @self.app.route('/api/model')
        def model_info():
            if not self.model_available:
                return jsonify({'success': False, 'error': 'No model loaded'}), 500
            return jsonify({
                'success': True,
                'kind': self.classifier.kind,
                'summary': self.classifier.summary(),
                'config': dict(self.classifier.config.pairs()),
            })

        @self.app.route('/api/classify', methods=['POST'])
        def classify():
            if not self.model_available:
                return jsonify({'success': False, 'error': 'No model loaded'}), 500

            if 'image' not in request.files:
                return jsonify({'success': False, 'error': 'No image file provided'}), 400

            file = request.files['image']
            if not file.filename:
                return jsonify({'success': False, 'error': 'No file selected'}), 400

            filename = secure_filename(file.filename)
            try:
                img = decode_image(file.read())
                label, score = classify_image(self.classifier, img)
            except AvdbError as e:
                logger.warning(f"Rejected {filename}: {e}")
                return jsonify({'success': False, 'error': str(e)}), 400

            return jsonify({
                'success': True,
                'filename': filename,
                'label': label.title,
                'score': score,
            })

    def run(self, host=settings.HOST, port=settings.PORT, debug=False):
        """Run the application"""
        self.app.run(host=host, port=port, debug=debug, use_reloader=False)


def create_app(model_file=None, classifier: Classifier = None) -> Flask:
    """Create and configure the Flask application"""
    return DroneBirdApp(model_file, classifier).app
