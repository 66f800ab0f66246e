import logging

from django.conf import settings
from django.http import JsonResponse
from django.views.decorators.http import require_GET

from .exceptions import DomainError
from .experiments import build_report
from .forms import RunConfigForm

logger = logging.getLogger(__name__)

# Fields that only make sense on the command line
CLI_ONLY_FIELDS = ('format', 'out', 'trials_out')


def _report_response(request, command):
    form = RunConfigForm(request.GET)
    for name in CLI_ONLY_FIELDS:
        if name in request.GET:
            return JsonResponse({'error': f'{name} is not supported by the API'}, status=400)
    if not form.is_valid():
        return JsonResponse({'error': form.errors.get_json_data()}, status=400)

    try:
        config = form.to_run_config(command)
        limit = settings.CORRELATION_LAB['API_MAX_TRIALS']
        if config.n_trials > limit:
            return JsonResponse({'error': f'trials may not exceed {limit}'}, status=400)
        report = build_report(config)
    except DomainError as e:
        logger.warning(f'{command} rejected: {e}')
        return JsonResponse({'error': str(e)}, status=400)

    return JsonResponse(report.as_dict())


# ========================
# REPORT ENDPOINTS
# ========================

@require_GET
def curves_api(request):
    return _report_response(request, 'curves')


@require_GET
def chsh_api(request):
    return _report_response(request, 'chsh')


@require_GET
def spin_api(request):
    return _report_response(request, 'spin')


@require_GET
def fourlists_api(request):
    return _report_response(request, 'fourlists')


@require_GET
def signalling_api(request):
    return _report_response(request, 'signalling')


@require_GET
def feasibility_api(request):
    return _report_response(request, 'feasibility')


# ========================
# ERROR HANDLERS
# ========================

def error_400_view(request, exception=None):
    return JsonResponse({'error': 'Bad request'}, status=400)


def error_404_view(request, exception=None):
    return JsonResponse({'error': f'No endpoint at {request.path}'}, status=404)


def error_500_view(request):
    logger.error(f'Unhandled error on {request.path}')
    return JsonResponse({'error': 'Internal server error'}, status=500)
