"""Common fixtures for the degree lab tests."""
import os
import sys

import pytest

# Add project root to Python path so degree_lab can be found
project_root = os.path.dirname(os.path.dirname(__file__))
if project_root not in sys.path:
    sys.path.insert(0, project_root)


@pytest.fixture(scope="session")
def catalog():
    """The shipped manifold catalog, loaded once."""
    from degree_lab.catalog import load_catalog

    return load_catalog()


@pytest.fixture
def table_csv(tmp_path):
    """A tabulated t^2 Young function with a header and a comment line."""
    path = tmp_path / "square.csv"
    path.write_text("t,P\n# sampled t^2\n0,0\n1,1\n2,4\n4,16\n8,64\n", encoding="utf-8")
    return path
