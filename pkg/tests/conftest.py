import numpy as np
import pytest

import smclab

# Benchmark parameter set shared across the suite (first-order scenario
# family: disturbance bound 0.5, outer 0.8/0.8/0.25/0.7, poly inner
# 2.5/1.2/1.8, layer 0.08).
DBAR = 0.5


@pytest.fixture(scope="session")
def table_outer():
    return smclab.OuterGainParams(k0=0.8, k1=0.8, eps0=0.25, gamma=0.7)


@pytest.fixture(scope="session")
def table_inner_poly():
    return smclab.InnerLawParams(law="poly", a=2.5, b=1.2, alpha=1.8)


@pytest.fixture(scope="session")
def table_inner_erf():
    return smclab.InnerLawParams(law="erf", U=1.2)


@pytest.fixture(scope="session")
def table_hybrid_poly(table_outer, table_inner_poly):
    return smclab.HybridGainParams(outer=table_outer, inner=table_inner_poly, eps=0.08)


@pytest.fixture(scope="session")
def table_hybrid_erf(table_outer, table_inner_erf):
    return smclab.HybridGainParams(outer=table_outer, inner=table_inner_erf, eps=0.08)


@pytest.fixture(scope="session")
def table_sato():
    return smclab.SatoParams(K=1.4, sigma=1e-9)


@pytest.fixture(scope="session")
def two_link():
    return smclab.TwoLinkParams()


@pytest.fixture(scope="session")
def preset_run():
    """Cached (scenario, trajectory) per preset; sims are deterministic,
    so sharing across tests is safe."""
    cache = {}

    def _run(name):
        if name not in cache:
            scenario = smclab.load_preset(name)
            cache[name] = (scenario, smclab.simulate(scenario.config))
        return cache[name]

    return _run


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
