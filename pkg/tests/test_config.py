from pathlib import Path

import pytest
from pydantic import ValidationError

from linkobs.config import DEFAULT_Q_MAX, Settings
from linkobs.errors import ConfigError


def test_defaults(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.chdir(tmp_path)
    settings = Settings.from_env()
    assert settings.q_max == DEFAULT_Q_MAX
    assert settings.skein_bound == 12
    assert settings.grid_depth == 10


def test_q_max_from_environment(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("LINKOBS_Q_MAX", "10")
    assert Settings.from_env().q_max == 10


def test_q_max_from_dotenv_file(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.chdir(tmp_path)
    (tmp_path / ".env").write_text("LINKOBS_Q_MAX=5\n")
    assert Settings.from_env().q_max == 5


@pytest.mark.parametrize("raw", ["many", "1"])
def test_bad_q_max_in_environment(raw: str, tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("LINKOBS_Q_MAX", raw)
    with pytest.raises(ConfigError):
        Settings.from_env()


def test_settings_are_validated() -> None:
    with pytest.raises(ValidationError):
        Settings(grid_depth=0)
    with pytest.raises(ValidationError):
        Settings(q_max=1)
