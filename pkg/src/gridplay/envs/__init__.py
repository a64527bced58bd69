"""Shipped environments. Importing this package registers their kinds,
features, and rewards in the default registry."""

from . import overcooked, search_rescue
from .overcooked import make_cramped_room
from .search_rescue import make_search_rescue

_FACTORIES = {
    overcooked.SCOPE: overcooked.make_env,
    search_rescue.SCOPE: search_rescue.make_env,
}


def make_env(config):
    """Build an environment (with the right hooks) from a config."""
    try:
        factory = _FACTORIES[config.scope]
    except KeyError:
        raise ValueError(f"no environment registered for scope {config.scope!r}") from None
    return factory(config)


__all__ = ["make_cramped_room", "make_env", "make_search_rescue",
           "overcooked", "search_rescue"]
