import pytest

from propmeta import StudyRecord


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    # expose per-phase reports so fixtures can see test outcomes
    outcome = yield
    rep = outcome.get_result()
    setattr(item, "rep_" + rep.when, rep)


@pytest.fixture
def schwarzer_pair():
    """Studies 10 and 13 from the Schwarzer et al. prevalence data."""
    return [
        StudyRecord("study 10", 32, 16557),
        StudyRecord("study 13", 1, 676),
    ]


@pytest.fixture
def four_tenths():
    """Four studies all observing a 10% proportion at different sample sizes."""
    return [
        StudyRecord("s1", 1, 10),
        StudyRecord("s2", 10, 100),
        StudyRecord("s3", 100, 1000),
        StudyRecord("s4", 1000, 10000),
    ]
