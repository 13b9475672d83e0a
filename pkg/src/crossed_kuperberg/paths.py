from pathlib import Path
import json
import os
from typing import Literal, Optional

from loguru import logger
from platformdirs import user_config_dir
from pydantic import BaseModel, PositiveInt, ValidationError

APP_NAME = "crossed-kuperberg"

CONFIG_DIR = Path(user_config_dir(APP_NAME))
SETTINGS_FILE = CONFIG_DIR / "settings.json"

DEFAULT_BUDGET = 1_000_000
BUDGET_ENV = "CK_BUDGET"
STRATEGY_ENV = "CK_STRATEGY"


class Settings(BaseModel):
    budget: PositiveInt = DEFAULT_BUDGET
    strategy: Literal["greedy", "naive"] = "greedy"


def ensure_parents(path: Path):
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def atomic_write(path: Path, data: str):
    tmp = Path(str(path) + ".tmp")
    ensure_parents(tmp)
    tmp.write_text(data, encoding="utf-8")
    tmp.replace(path)


def _from_file(path: Path) -> dict:
    if not path.exists():
        return {}
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        logger.warning(f"ignoring unreadable settings file {path}: {exc}")
        return {}
    if not isinstance(data, dict):
        logger.warning(f"ignoring settings file {path}: not a JSON object")
        return {}
    return {k: v for k, v in data.items() if k in Settings.model_fields}


def load_settings(budget: Optional[int] = None, strategy: Optional[str] = None, path: Optional[Path] = None) -> Settings:
    """Resolve settings: explicit argument, then environment, then settings file, then default."""
    values = _from_file(path or SETTINGS_FILE)
    for key, env in (("budget", BUDGET_ENV), ("strategy", STRATEGY_ENV)):
        if os.getenv(env):
            values[key] = os.environ[env]
            logger.debug(f"{key} from ${env}")
    if budget is not None:
        values["budget"] = budget
    if strategy is not None:
        values["strategy"] = strategy
    try:
        return Settings.model_validate(values)
    except ValidationError as exc:
        logger.warning(f"invalid settings {values}, using defaults: {exc}")
        return Settings()


def save_settings(settings: Settings, path: Optional[Path] = None) -> Path:
    target = path or SETTINGS_FILE
    atomic_write(target, json.dumps(settings.model_dump(), indent=2, sort_keys=True) + "\n")
    return target
