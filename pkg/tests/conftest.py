import pytest

from nuconcat import catalog as cataloglib
from nuconcat import concat, library


@pytest.fixture(scope="session")
def cat():
    return cataloglib.default_catalog()


@pytest.fixture(scope="session")
def lib(cat):
    return library.GadgetLibrary(cat)


@pytest.fixture(scope="session")
def layouts(cat):
    steane = cat.code("steane")
    rm15 = cat.code("rm15")
    fp = cat.code("five_prime")
    return {
        105: concat.uniform_layout(steane, rm15),
        49: concat.non_uniform_layout(steane, rm15),
        75: concat.uniform_layout(fp, rm15),
        47: concat.non_uniform_layout(fp, rm15),
        73: concat.non_uniform_layout(steane, rm15, b2_inner=steane),
        55: concat.non_uniform_layout(fp, rm15, b2_inner=fp),
    }
