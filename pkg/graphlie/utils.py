import copy
import json
import logging
from importlib import resources
from pathlib import Path

LOG_FORMAT = "%(asctime)s : %(levelname)s : %(message)s"


class FieldError(ValueError):
    """Bad field spec, forbidden characteristic or unparseable scalar."""


class SingularMatrixError(ArithmeticError):
    """Raised when inverting a singular matrix or graded map."""


class GraphFormatError(ValueError):
    """Malformed graph input.

    Exactly one of ``line`` (edge-list text, 1-based) or ``index`` (JSON edge
    position, 0-based) is set when the problem can be located.
    """

    def __init__(self, message, line=None, index=None):
        if line is not None:
            message = f"{message} at line {line}"
        elif index is not None:
            message = f"{message} at edge {index}"
        super().__init__(message)
        self.line = line
        self.index = index


class LimitExceededError(ValueError):
    """A vertex or dimension budget of an exhaustive routine was exceeded."""


class MorphismError(ValueError):
    """Maps that do not fit their algebras or do not preserve the graph."""


class VerificationError(AssertionError):
    """A property that must hold failed; ``payload`` is the counterexample."""

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload


def _merge(base, override):
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            _merge(base[key], value)
        else:
            base[key] = value
    return base


def read_default_config():
    config_path = resources.files("graphlie") / "configs" / "config_default.json"
    with config_path.open(encoding="utf-8") as f:
        return json.load(f)["config"]


def read_config(config_path=None):
    """Read a config file, falling back to the bundled defaults for missing keys.

    :param config_path: path to a JSON file with a top-level ``"config"`` key,
        or None for the bundled ``config_default.json``
    :return: config dict
    """
    config = read_default_config()
    if config_path is None:
        return config
    config_path = Path(config_path)
    with config_path.open(encoding="utf-8") as f:
        content = json.load(f)
    if "config" not in content:
        raise ValueError(f"{config_path} does not contain the required 'config' key.")
    return _merge(copy.deepcopy(config), content["config"])


def to_json(document, indent=2):
    return json.dumps(document, ensure_ascii=False, indent=indent)


def write_document(document, out_path=None, stream=None):
    """Write a JSON document to ``out_path`` or to ``stream``."""
    text = to_json(document) + "\n"
    if out_path is None:
        stream.write(text)
        return
    out_path = Path(out_path)
    if out_path.parent and not out_path.parent.exists():
        out_path.parent.mkdir(parents=True)
    with out_path.open("w", encoding="utf-8") as outfp:
        outfp.write(text)


def load_json_argument(value):
    """Inline JSON (starting with ``{`` or ``[``) or a path to a JSON file."""
    stripped = value.lstrip()
    if stripped.startswith(("{", "[")):
        return json.loads(stripped)
    with Path(value).open(encoding="utf-8") as f:
        return json.load(f)


def configure_logging(verbosity=0, log_file=None):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(format=LOG_FORMAT, level=level, force=True)
    for handler in logging.getLogger().handlers:
        handler.setLevel(level)
    package_logger = logging.getLogger("graphlie")
    for handler in list(package_logger.handlers):
        if isinstance(handler, logging.FileHandler):
            package_logger.removeHandler(handler)
            handler.close()
    package_logger.setLevel(logging.NOTSET)
    if log_file is not None:
        handler = logging.FileHandler(log_file, mode="w", encoding="utf-8")
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler.setLevel(logging.INFO)
        package_logger.addHandler(handler)
        package_logger.setLevel(min(level, logging.INFO))
    return package_logger
