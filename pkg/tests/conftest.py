import random

from hypothesis import HealthCheck, settings, strategies as st

from pisym.generate import random_term

settings.register_profile("pisym", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("pisym")

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def terms(draw, max_size=12, allow_mixed=False, allow_rep=True):
    return random_term(random.Random(draw(seeds)), max_size=max_size, allow_mixed=allow_mixed, allow_rep=allow_rep)
