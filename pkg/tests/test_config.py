from src.config import DEFAULT_MAX_FACTS, load_settings


def test_defaults(monkeypatch):
    for name in ("MODLP_MAX_FACTS", "MODLP_LOG_LEVEL", "MODLP_WORKERS"):
        monkeypatch.delenv(name, raising=False)
    settings = load_settings()
    assert settings.max_facts == DEFAULT_MAX_FACTS
    assert settings.log_level == "WARNING"
    assert settings.workers == 1


def test_environment_then_overrides(monkeypatch):
    monkeypatch.setenv("MODLP_MAX_FACTS", "500")
    monkeypatch.setenv("MODLP_WORKERS", "3")
    monkeypatch.setenv("MODLP_LOG_LEVEL", "info")
    settings = load_settings()
    assert (settings.max_facts, settings.workers, settings.log_level) == (500, 3, "INFO")
    assert load_settings(max_facts=20, workers=None).max_facts == 20
    assert load_settings(max_facts=20, workers=None).workers == 3


def test_bad_environment_values_are_ignored(monkeypatch):
    monkeypatch.setenv("MODLP_MAX_FACTS", "lots")
    monkeypatch.setenv("MODLP_WORKERS", "0")
    settings = load_settings()
    assert settings.max_facts == DEFAULT_MAX_FACTS
    assert settings.workers == 1
