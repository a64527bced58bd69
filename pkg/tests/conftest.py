import pytest

import gridplay.envs  # noqa: F401  (registers the shipped scopes)


@pytest.fixture
def cramped_room():
    from gridplay.envs import make_cramped_room
    return make_cramped_room(seed=0)


@pytest.fixture
def search_rescue():
    from gridplay.envs import make_search_rescue
    return make_search_rescue(seed=0)
