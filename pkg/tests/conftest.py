import pytest

from arabsent import lexicon as lx
from arabsent.classifier import PipelineConfig, build_resources
from arabsent.config import load_config, load_resources
from arabsent.translit import default_exclusions, default_phrase_table

FODAFONE = "فودافون"
ETISALAT = "اتصالات"
SERVICE = "الخدمة"


@pytest.fixture(scope="session")
def sample_lexicon():
    return lx.sample_lexicon()


@pytest.fixture(scope="session")
def phrase_table():
    return default_phrase_table()


@pytest.fixture(scope="session")
def teleco_config():
    return load_config("bundled:egyptian_teleco.json")


@pytest.fixture(scope="session")
def teleco(teleco_config):
    """(resources, pipeline config) for the bundled Egyptian teleco use case."""
    return load_resources(teleco_config), teleco_config.pipeline


@pytest.fixture(scope="session")
def generic(sample_lexicon, phrase_table):
    cfg = PipelineConfig(domains={"general", "teleco"}, keywords=(FODAFONE, ETISALAT, SERVICE))
    return build_resources(sample_lexicon, cfg, phrase_table, default_exclusions()), cfg


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[num])
