from django.conf import settings
from django.core.exceptions import ImproperlyConfigured


def _configured():
    try:
        return settings.BHCAVITY
    except AttributeError:
        raise ImproperlyConfigured("Please define `BHCAVITY` in your settings.py file.")


def get(key, default=None):
    conf = _configured()
    if default is None and key not in conf:
        raise ImproperlyConfigured(
            'Please ensure BHCAVITY["%s"] is defined in your settings.py file.' % key
        )
    return conf.get(key, default)


def get_chi_max(num_sites):
    # Explicit setting wins; otherwise the bond dimension grows with the chain length.
    chi_max = get("DMRG_CHI_MAX", 0)
    if chi_max:
        return chi_max
    return 128 if num_sites <= 40 else 160
