import pytest

from hypergroups import builtin_table, finite_group_dual, product_dual, su2_dual

ACCEPTANCE_RESULTS: list[tuple[int, str, bool, str]] = []


def record_acceptance(number: int, title: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE_RESULTS.append((number, title, ok, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(ACCEPTANCE_RESULTS):
        status = "PASS" if ok else "FAIL"
        line = f"criterion {number:2d} [{status}] {title}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def su2():
    return su2_dual()


@pytest.fixture(scope="session")
def s3():
    return finite_group_dual(builtin_table("s3"))


@pytest.fixture(scope="session")
def q8():
    return finite_group_dual(builtin_table("q8"))


@pytest.fixture(scope="session")
def z2():
    return finite_group_dual(builtin_table("z2"))


@pytest.fixture(scope="session")
def z4():
    return finite_group_dual(builtin_table("z4"))


@pytest.fixture(scope="session")
def s3_x_z4(s3, z4):
    return product_dual([s3, z4])
