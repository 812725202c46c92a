import pytest

from claimgraph.providers import ProviderSet, StubOptions, reset_provider_calls

# Fixture pair used by e2e tests: the second output sentence flips "opened"
# to "closed", which the stub NLI antonym rule reads as a contradiction.
SOURCE_TEXT = (
    "Alice opened the store on Monday. "
    "The store is in Paris. "
    "Bob works at the store."
)
OUTPUT_TEXT = (
    "Alice opened the store on Monday. "
    "Alice closed the store on Monday."
)
# Replacing the contradicted sentence with an exact source sentence makes
# every claim entailed.
REVISED_OUTPUT_TEXT = (
    "Alice opened the store on Monday. "
    "Bob works at the store."
)


@pytest.fixture(autouse=True)
def _fresh_call_counts():
    reset_provider_calls()
    yield
    reset_provider_calls()


@pytest.fixture
def stub_providers():
    return ProviderSet.stubs()


@pytest.fixture
def cached_stub_providers(tmp_path):
    return ProviderSet.stubs(cache_dir=str(tmp_path / "cache"))


@pytest.fixture
def gazetteer_options():
    return StubOptions(gazetteer={"Alice": "person", "Bob": "person", "Acme": "org"})
