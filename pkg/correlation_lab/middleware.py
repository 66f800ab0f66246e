"""
Request timing for the JSON API
"""
import logging
import time

from django.utils.deprecation import MiddlewareMixin

logger = logging.getLogger(__name__)

API_PREFIX = '/api/'


class ApiTimingMiddleware(MiddlewareMixin):
    """Stamp API responses with their handling time in X-Elapsed-Ms."""

    def process_request(self, request):
        request.start_time = time.perf_counter()

    def process_response(self, request, response):
        start = getattr(request, 'start_time', None)
        if start is None or not request.path.startswith(API_PREFIX):
            return response
        elapsed_ms = (time.perf_counter() - start) * 1000.0
        response['X-Elapsed-Ms'] = f'{elapsed_ms:.1f}'
        logger.info(f'{request.method} {request.path} -> {response.status_code} in {elapsed_ms:.1f} ms')
        return response
