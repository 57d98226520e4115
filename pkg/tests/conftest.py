import pytest

from linkobs.diagram import LinkDiagram, corpus
from linkobs.seifert import SeifertMatrix, seifert_matrix

# Corpus diagrams small enough for the skein oracle at its default bound.
SMALL = [
    "unknot",
    "unlink2",
    "unlink3",
    "hopf+",
    "hopf-",
    "trefoil_right",
    "trefoil_left",
    "figure_eight",
    "whitehead+",
    "whitehead-",
    "borromean",
    "nghl2",
    "m_0_1",
    "m_0_-1",
]


@pytest.fixture
def trefoil() -> LinkDiagram:
    return corpus("trefoil_right")


@pytest.fixture
def trefoil_seifert(trefoil: LinkDiagram) -> SeifertMatrix:
    return seifert_matrix(trefoil)


@pytest.fixture
def hopf() -> LinkDiagram:
    return corpus("hopf+")


@pytest.fixture(autouse=True)
def _no_env_overrides(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv("LINKOBS_Q_MAX", raising=False)
