"""
File formats: long-format CSV input, flat key-value run configuration,
JSON fits files and simulation reports, and run manifests.

Dataset CSV (UTF-8, header required)::

    subject_id,delay,indifference_point[,amount]

One row per observation; ``amount`` (the larger-later amount) defaults to 1.
Rows are grouped by subject, sorted by delay and divided by ``amount``.

Config file: one ``key = value`` per line, ``#`` starts a comment. Keys are
those of :data:`CONFIG_KEYS`. Command-line flags override file values.
"""
import csv
import hashlib
import json
import math
import platform
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .distributions import DEFAULT_SLT, SltConfig
from .errors import ConfigError, DataError, EmptyDatasetError
from .estimation import FitFailure, FitResult, IndifferenceSeries

__all__ = [
    "ingest",
    "write_dataset",
    "RunConfig",
    "CONFIG_KEYS",
    "load_config",
    "dumps",
    "write_json",
    "read_json",
    "write_fits_file",
    "read_fits_file",
    "FITS_SCHEMA",
    "REPORT_SCHEMA",
    "write_manifest",
    "bundled_path",
    "file_sha256",
]

FITS_SCHEMA = "sltbeta.fits/1"
REPORT_SCHEMA = "sltbeta.simulation/1"
_REQUIRED = ("subject_id", "delay", "indifference_point")


def bundled_path(name):
    """Path of a data file shipped inside the package (``sltbeta/data``)."""
    return Path(str(resources.files("sltbeta") / "data" / name))


def _number(text, what, row):
    try:
        v = float(text)
    except (TypeError, ValueError):
        raise DataError(f"{what} {text!r} is not a number", row=row) from None
    if not math.isfinite(v):
        raise DataError(f"{what} must be finite, got {text!r}", row=row)
    return v


def ingest(path):
    """Read a long-format dataset into a list of :class:`IndifferenceSeries`.

    Subjects keep their first-appearance order. Row numbers in errors count
    the header as row 1.

    Raises
    ------
    EmptyDatasetError
        If the file has no header or no data rows.
    DataError
        Malformed numbers, non-positive delays or amounts, normalized values
        outside [0, 1], duplicate (subject_id, delay) pairs.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise EmptyDatasetError(f"{path}: empty dataset")
        header = [h.strip() for h in reader.fieldnames]
        missing = [c for c in _REQUIRED if c not in header]
        if missing:
            raise DataError(f"{path}: header lacks column(s) {missing}", row=1)
        reader.fieldnames = header

        subjects = {}
        seen = {}
        for rownum, rec in enumerate(reader, start=2):
            if all((v is None or not str(v).strip()) for v in rec.values()):
                continue
            sid = (rec["subject_id"] or "").strip()
            if not sid:
                raise DataError("missing subject_id", row=rownum)
            delay = _number(rec["delay"], "delay", rownum)
            point = _number(rec["indifference_point"], "indifference_point", rownum)
            amount_text = (rec.get("amount") or "").strip()
            amount = _number(amount_text, "amount", rownum) if amount_text else 1.0
            if delay <= 0:
                raise DataError(f"delay must be positive, got {delay!r}", row=rownum)
            if amount <= 0:
                raise DataError(f"amount must be positive, got {amount!r}", row=rownum)
            y = point / amount
            if not 0.0 <= y <= 1.0:
                raise DataError(
                    f"indifference_point {point!r} / amount {amount!r} = {y!r} is outside [0, 1]",
                    row=rownum,
                )
            key = (sid, delay)
            if key in seen:
                raise DataError(
                    f"duplicate (subject_id, delay) = ({sid!r}, {delay!r}); first seen on row {seen[key]}",
                    row=rownum,
                )
            seen[key] = rownum
            subjects.setdefault(sid, []).append((delay, y, amount, rownum))

    if not subjects:
        raise EmptyDatasetError(f"{path}: empty dataset")
    out = []
    for sid, obs in subjects.items():
        obs.sort(key=lambda t: t[0])
        try:
            out.append(
                IndifferenceSeries(sid, [o[0] for o in obs], [o[1] for o in obs], obs[0][2])
            )
        except DataError as exc:
            raise DataError(f"{exc} (rows {sorted(o[3] for o in obs)})") from None
    return out


def write_dataset(population, path, amount=None):
    """Write series as a long-format CSV (values rescaled by each series' amount)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(("subject_id", "delay", "indifference_point", "amount"))
        for s in population:
            a = s.amount if amount is None else amount
            for d, y in zip(s.delays, s.values):
                w.writerow((s.subject_id, format(d, ".17g"), format(y * a, ".17g"), format(a, ".17g")))


# --------------------------------------------------------------------------
# configuration


@dataclass
class RunConfig:
    slt_s: float = DEFAULT_SLT.s
    slt_l: float = DEFAULT_SLT.l
    optimizer_tolerance: float = 1e-8
    optimizer_max_evals: int = 10000
    optimizer_restarts: int = 3
    screen_c1_threshold: float = 0.2
    screen_c2_threshold: float = 0.1
    screen_enabled: bool = False
    simulation_replications: int = 1000
    simulation_seed: int = 0
    io_input: str = ""
    io_output_dir: str = ""
    _lines: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def slt(self):
        return SltConfig(self.slt_s, self.slt_l)

    def fit_options(self):
        from .estimation import FitOptions

        return FitOptions(
            tol=self.optimizer_tolerance,
            max_evals=self.optimizer_max_evals,
            restarts=self.optimizer_restarts,
        )

    def to_dict(self):
        d = asdict(self)
        d.pop("_lines")
        return {CONFIG_KEYS_BY_ATTR[k]: v for k, v in d.items()}

    def sha256(self):
        return hashlib.sha256(dumps(self.to_dict()).encode("utf-8")).hexdigest()

    def set(self, key, value, line=None):
        attr = CONFIG_KEYS.get(key)
        if attr is None:
            raise ConfigError(f"unknown config key {key!r}", line=line)
        kind = type(getattr(RunConfig(), attr))
        try:
            if kind is bool:
                if isinstance(value, str):
                    low = value.strip().lower()
                    if low not in ("true", "false", "1", "0", "yes", "no"):
                        raise ValueError(value)
                    value = low in ("true", "1", "yes")
                value = bool(value)
            elif kind is int:
                value = int(str(value).strip())
            elif kind is float:
                value = float(str(value).strip())
            else:
                value = str(value).strip()
        except ValueError:
            raise ConfigError(f"{key}: cannot parse {value!r} as {kind.__name__}", line=line) from None
        setattr(self, attr, value)
        self._lines[attr] = line

    def validate(self):
        def fail(attr, msg):
            raise ConfigError(f"{CONFIG_KEYS_BY_ATTR[attr]}: {msg}", line=self._lines.get(attr))

        if not (math.isfinite(self.slt_s) and self.slt_s > 0):
            fail("slt_s", "must be positive")
        if not (math.isfinite(self.slt_l) and self.slt_l >= 0):
            fail("slt_l", "must be nonnegative")
        try:
            SltConfig(self.slt_s, self.slt_l)
        except ConfigError as exc:
            # blame whichever of the two keys was set last
            later = max(("slt_s", "slt_l"), key=lambda a: self._lines.get(a) or 0)
            fail(later, str(exc))
        if not self.optimizer_tolerance > 0:
            fail("optimizer_tolerance", "must be positive")
        if self.optimizer_max_evals < 1:
            fail("optimizer_max_evals", "must be >= 1")
        if self.optimizer_restarts < 0:
            fail("optimizer_restarts", "must be >= 0")
        if not self.screen_c1_threshold >= 0:
            fail("screen_c1_threshold", "must be >= 0")
        if not self.screen_c2_threshold >= 0:
            fail("screen_c2_threshold", "must be >= 0")
        if self.simulation_replications < 1:
            fail("simulation_replications", "must be >= 1")
        if self.simulation_seed < 0:
            fail("simulation_seed", "must be >= 0")
        return self


CONFIG_KEYS = {
    "slt.s": "slt_s",
    "slt.l": "slt_l",
    "optimizer.tolerance": "optimizer_tolerance",
    "optimizer.max_evals": "optimizer_max_evals",
    "optimizer.restarts": "optimizer_restarts",
    "screen.c1_threshold": "screen_c1_threshold",
    "screen.c2_threshold": "screen_c2_threshold",
    "screen.enabled": "screen_enabled",
    "simulation.replications": "simulation_replications",
    "simulation.seed": "simulation_seed",
    "io.input": "io_input",
    "io.output_dir": "io_output_dir",
}
CONFIG_KEYS_BY_ATTR = {v: k for k, v in CONFIG_KEYS.items()}


def load_config(path=None, overrides=None):
    """Read a flat ``key = value`` config file, apply overrides, validate.

    Errors carry the 1-based line number of the offending entry.
    """
    cfg = RunConfig()
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line=lineno)
                key, value = (p.strip() for p in line.split("=", 1))
                cfg.set(key, value, line=lineno)
    for key, value in (overrides or {}).items():
        if value is not None:
            cfg.set(key, value)
    return cfg.validate()


# --------------------------------------------------------------------------
# JSON


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return format(v, ".17g") if math.isfinite(v) else "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return json.dumps(obj.value)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in seq):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in seq) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=2):
    """JSON text with floats written to 17 significant digits; NaN/inf become null."""
    return _encode(obj, indent, 0) + "\n"


def write_json(obj, path):
    Path(path).write_text(dumps(obj), encoding="utf-8")


def read_json(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def write_fits_file(records, path, config=None, summary=None, delays=None):
    """Write fit results and per-subject failures in the versioned fits schema.

    ``delays`` optionally maps subject id to its delay grid so simulations
    can be driven from the fits file alone.
    """
    doc = {
        "schema": FITS_SCHEMA,
        "config": config.to_dict() if config is not None else None,
        "delays": {str(k): list(v) for k, v in (delays or {}).items()},
        "fits": [r.to_dict() for r in records if isinstance(r, FitResult)],
        "errors": [r.to_dict() for r in records if isinstance(r, FitFailure)],
    }
    if summary is not None:
        doc["summary"] = summary
    write_json(doc, path)


def read_fits_file(path):
    """Return ``(fits, errors)``; ``errors`` are raw dicts."""
    doc = read_json(path)
    if doc.get("schema") != FITS_SCHEMA:
        raise DataError(f"{path}: not a fits file (schema {doc.get('schema')!r})")
    return [FitResult.from_dict(d) for d in doc["fits"]], doc.get("errors", [])


def file_sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(path, command, argv, config, inputs=(), outputs=()):
    """Record what is needed to reproduce a run: config, hash, seed, versions, file hashes."""
    import scipy

    from . import __version__

    doc = {
        "command": command,
        "argv": list(argv),
        "config": config.to_dict(),
        "config_sha256": config.sha256(),
        "seed": config.simulation_seed,
        "versions": {
            "sltbeta": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
        "inputs": {str(p): file_sha256(p) for p in inputs},
        "outputs": {str(p): file_sha256(p) for p in outputs},
    }
    write_json(doc, path)
    return doc
