import time

from pytest import raises

from blowup_kit.support_for_testing import MockLogger
from blowup_kit.timing import timer


def test_timer():
    logger = MockLogger()
    with timer(logger=logger, name="reconstruct") as t:  # type: ignore
        time.sleep(0.01)
    assert t.duration > 0
    assert float(t) == t.duration
    assert len(logger.internal) == 1
    assert logger.internal[0].startswith("stage.reconstruct - ")
    assert logger.internal[0].endswith("s")


def test_timer_without_name_or_logger():
    logger = MockLogger()
    with timer(logger=logger):  # type: ignore
        pass
    assert logger.internal[0].startswith("stage - ")

    with timer() as t:
        pass
    assert t.duration >= 0


def test_timer_respects_level():
    logger = MockLogger(level=30)  # type: ignore
    with timer(logger=logger, name="quiet"):  # type: ignore
        pass
    assert logger.internal == []


def test_timer_fail():
    with raises(ValueError):
        t = timer()
        t.__exit__()

    with timer() as t:
        pass
    with raises(ValueError):
        with t:
            pass

    with raises(ValueError):
        with timer() as t:
            _ = t.duration
