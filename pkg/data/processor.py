"""
Model configuration ingestion and validation
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from data.models import (LevyModel, Stable, StableBoundary, TemperedStable, TruncatedStable,
                         Mixture, RunConfig, COMMANDS, SCALING_TARGETS)
from calculations.errors import NumericalError
from calculations.levy_model import calibrated_stable_scale, centered_drift

logger = logging.getLogger(__name__)

FAMILIES = ('stable', 'stable_boundary', 'tempered_stable', 'truncated_stable', 'mixture')
GRID_SCALES = ('lin', 'log')


class SchemaError(Exception):
    """Custom exception for invalid model or run configurations"""

    def __init__(self, errors: List[Tuple[str, str]]):
        self.errors = list(errors)
        super().__init__('; '.join(f"{path}: {reason}" for path, reason in self.errors))

    def to_dict(self) -> List[Dict[str, str]]:
        return [{'path': path, 'reason': reason} for path, reason in self.errors]


def parse_grid(spec: str, path: str = 'grid') -> List[float]:
    """
    Parse a grid spec 'a:b:n' (linear) or 'a:b:n,log' (geometric)

    Args:
        spec: Grid specification
        path: Config path reported in errors

    Returns:
        Strictly increasing list of n finite values from a to b

    Raises:
        SchemaError: Malformed spec
    """
    body, _, scale = spec.strip().partition(',')
    scale = scale.strip() or 'lin'
    parts = body.split(':')
    if len(parts) != 3:
        raise SchemaError([(path, f"expected a:b:n[,log], got {spec!r}")])
    if scale not in GRID_SCALES:
        raise SchemaError([(path, f"unknown grid scale {scale!r}; use one of {GRID_SCALES}")])
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise SchemaError([(path, f"non-numeric grid bounds in {spec!r}")])
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise SchemaError([(path, "grid bounds must be finite")])
    if count < 1:
        raise SchemaError([(path, f"grid needs at least one point: {count}")])
    if count == 1:
        return [lo]
    if not lo < hi:
        raise SchemaError([(path, f"grid bounds must increase: {lo} >= {hi}")])
    if scale == 'log':
        if not lo > 0:
            raise SchemaError([(path, "log grid needs a positive lower bound")])
        ratio = hi / lo
        return [lo * ratio ** (k / (count - 1)) for k in range(count)]
    step = (hi - lo) / (count - 1)
    return [lo + k * step for k in range(count)]


class ModelConfigProcessor:
    """Turns model JSON documents into validated LevyModel and RunConfig objects"""

    MODEL_FIELDS = ('sigma', 'b', 'jumps', 'x0', 'declared_alpha', 'declared_beta')
    FAMILY_FIELDS = {
        'stable': ('alpha', 'scale'),
        'stable_boundary': ('scale',),
        'tempered_stable': ('alpha', 'theta', 'scale'),
        'truncated_stable': ('alpha', 'cutoff', 'scale'),
        'mixture': ('components',),
    }
    RUN_FIELDS = ('command', 'grid', 'what', 'method', 't', 'rel_tol', 'suite', 'target',
                  'scan_range', 'out')

    def __init__(self):
        self.last_loaded_model: Optional[LevyModel] = None
        self.validation_errors: List[Tuple[str, str]] = []

    # --- entry points ----------------------------------------------------------------------

    def load_model_config(self, file_path_or_buffer) -> LevyModel:
        """
        Load a model from a JSON file or buffer

        Raises:
            SchemaError: Unreadable file or invalid model
        """
        try:
            if isinstance(file_path_or_buffer, (str, Path)):
                file_path = Path(file_path_or_buffer)
                if not file_path.exists():
                    raise SchemaError([('config', f"file not found: {file_path}")])
                text = file_path.read_text(encoding='utf-8')
            else:
                text = file_path_or_buffer.read()
            model = self.parse_model(self._decode(text))
            self.last_loaded_model = model
            return model
        except Exception as e:
            if isinstance(e, SchemaError):
                raise
            raise SchemaError([('config', f"error loading model: {e}")])

    def parse_config(self, text: str, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
        """
        Parse a run configuration.

        The document is either a bare model or {"model": {...}, "command": ..., ...};
        keys in overrides (typically CLI flags) replace those of the document.

        Raises:
            SchemaError: Every problem found, with its path
        """
        document = self._decode(text)
        if not isinstance(document, dict):
            raise SchemaError([('', 'configuration must be a JSON object')])
        if 'model' in document:
            model_doc = document['model']
            run_doc = {k: v for k, v in document.items() if k != 'model'}
        else:
            model_doc, run_doc = document, {}
        run_doc.update({k: v for k, v in (overrides or {}).items() if v is not None})

        self.validation_errors = []
        model = None
        try:
            model = self.parse_model(model_doc, prefix='model.' if 'model' in document else '')
        except SchemaError as e:
            self.validation_errors.extend(e.errors)
        options = self._parse_run_options(run_doc)
        if self.validation_errors:
            raise SchemaError(self.validation_errors)
        try:
            return RunConfig(model=model, **options)
        except ValueError as e:
            raise SchemaError([('', str(e))])

    # --- model -------------------------------------------------------------------------------

    def parse_model(self, data: Any, prefix: str = '') -> LevyModel:
        """
        Build a LevyModel from a decoded JSON object

        Raises:
            SchemaError: List of (path, reason) for every invalid field
        """
        errors: List[Tuple[str, str]] = []
        if not isinstance(data, dict):
            raise SchemaError([(prefix.rstrip('.') or 'model', 'model must be a JSON object')])
        for key in data:
            if key not in self.MODEL_FIELDS:
                errors.append((prefix + key, 'unknown field'))

        sigma = self._number(data, 'sigma', prefix, errors, required=True, minimum=0.0)
        jumps = None
        if data.get('jumps') is not None:
            jumps = self._parse_jumps(data['jumps'], prefix + 'jumps', errors)
        elif sigma == 0:
            errors.append((prefix + 'jumps', 'no process: sigma = 0 and no jumps'))

        b = None
        raw_b = data.get('b')
        if raw_b is None:
            errors.append((prefix + 'b', 'required field missing'))
        elif raw_b == 'centered':
            if not any(path.startswith(prefix + 'jumps') for path, _ in errors):
                try:
                    b = centered_drift(jumps)
                except NumericalError as e:
                    errors.append((prefix + 'b', f"centered drift undefined: {e}"))
        else:
            b = self._number(data, 'b', prefix, errors, required=True)

        x0 = self._number(data, 'x0', prefix, errors, minimum=0.0)
        declared_alpha = self._number(data, 'declared_alpha', prefix, errors)
        declared_beta = self._number(data, 'declared_beta', prefix, errors)
        if errors:
            raise SchemaError(errors)
        try:
            model = LevyModel(sigma=sigma, b=b, jumps=jumps, x0=x0,
                              declared_alpha=declared_alpha, declared_beta=declared_beta)
        except ValueError as e:
            raise SchemaError([(prefix.rstrip('.') or 'model', str(e))])
        logger.debug("parsed model %s", model.to_dict())
        return model

    def _parse_jumps(self, data: Any, path: str, errors: List[Tuple[str, str]]):
        if not isinstance(data, dict):
            errors.append((path, 'jumps must be a JSON object'))
            return None
        family = data.get('family')
        if family not in FAMILIES:
            errors.append((path + '.family', f"unknown family {family!r}; use one of {FAMILIES}"))
            return None
        allowed = self.FAMILY_FIELDS[family]
        for key in data:
            if key != 'family' and key not in allowed:
                errors.append((f"{path}.{key}", f"unknown field for {family}"))
        prefix = path + '.'
        start = len(errors)

        if family == 'mixture':
            components = data.get('components')
            if not isinstance(components, list) or not components:
                errors.append((prefix + 'components', 'mixture needs a nonempty list of components'))
                return None
            parsed = [self._parse_jumps(c, f"{prefix}components[{i}]", errors)
                      for i, c in enumerate(components)]
            if len(errors) > start:
                return None
            return Mixture(tuple(parsed))

        if family == 'stable_boundary':
            scale = self._number(data, 'scale', prefix, errors, exclusive_minimum=0.0)
            if len(errors) > start:
                return None
            return StableBoundary(scale=1.0 if scale is None else scale)

        if family == 'stable':
            alpha = self._number(data, 'alpha', prefix, errors, required=True, interval=(1.0, 2.0))
            scale = self._number(data, 'scale', prefix, errors, exclusive_minimum=0.0)
            if len(errors) > start:
                return None
            return Stable(alpha=alpha, scale=calibrated_stable_scale(alpha) if scale is None else scale)

        alpha = self._number(data, 'alpha', prefix, errors, required=True, interval=(0.0, 2.0))
        scale = self._number(data, 'scale', prefix, errors, exclusive_minimum=0.0)
        scale = 1.0 if scale is None else scale
        if family == 'tempered_stable':
            theta = self._number(data, 'theta', prefix, errors, required=True, exclusive_minimum=0.0)
            if len(errors) > start:
                return None
            return TemperedStable(alpha=alpha, theta=theta, scale=scale)
        cutoff = self._number(data, 'cutoff', prefix, errors, required=True, exclusive_minimum=0.0)
        if len(errors) > start:
            return None
        return TruncatedStable(alpha=alpha, cutoff=cutoff, scale=scale)

    @staticmethod
    def _number(data: Dict[str, Any], key: str, prefix: str, errors: List[Tuple[str, str]],
                required: bool = False, minimum: Optional[float] = None,
                exclusive_minimum: Optional[float] = None,
                interval: Optional[Tuple[float, float]] = None) -> Optional[float]:
        path = prefix + key
        if key not in data or data[key] is None:
            if required:
                errors.append((path, 'required field missing'))
            return None
        value = data[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
            errors.append((path, f"expected a finite number, got {value!r}"))
            return None
        value = float(value)
        if minimum is not None and value < minimum:
            errors.append((path, f"must be >= {minimum:g}: {value}"))
        elif exclusive_minimum is not None and not value > exclusive_minimum:
            errors.append((path, f"must be > {exclusive_minimum:g}: {value}"))
        elif interval is not None and not interval[0] < value < interval[1]:
            errors.append((path, f"must lie in ({interval[0]:g}, {interval[1]:g}): {value}"))
        return value

    # --- run options -------------------------------------------------------------------------

    def _parse_run_options(self, run_doc: Dict[str, Any]) -> Dict[str, Any]:
        options: Dict[str, Any] = {}
        errors = self.validation_errors
        for key in run_doc:
            if key not in self.RUN_FIELDS:
                errors.append((key, 'unknown field'))

        command = run_doc.get('command', 'exponent')
        if command not in COMMANDS:
            errors.append(('command', f"unknown command {command!r}; use one of {COMMANDS}"))
        options['command'] = command

        grid = run_doc.get('grid')
        if isinstance(grid, str):
            try:
                options['grid'] = parse_grid(grid)
            except SchemaError as e:
                errors.extend(e.errors)
        elif isinstance(grid, list):
            if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in grid):
                options['grid'] = [float(v) for v in grid]
            else:
                errors.append(('grid', 'grid list must hold numbers'))
        elif grid is not None:
            errors.append(('grid', f"expected a grid spec or list, got {grid!r}"))

        what = run_doc.get('what')
        if isinstance(what, str):
            options['what'] = tuple(w.strip() for w in what.split(',') if w.strip())
        elif isinstance(what, list):
            options['what'] = tuple(str(w) for w in what)

        suite = run_doc.get('suite')
        if isinstance(suite, str):
            options['suite'] = 'all' if suite == 'all' else tuple(s.strip() for s in suite.split(','))
        elif isinstance(suite, list):
            options['suite'] = tuple(str(s) for s in suite)

        target = run_doc.get('target')
        if target is not None:
            if target not in SCALING_TARGETS:
                errors.append(('target', f"unknown target {target!r}; use one of {SCALING_TARGETS}"))
            options['target'] = target

        span = run_doc.get('scan_range')
        if span is not None:
            if (isinstance(span, list) and len(span) == 2
                    and all(isinstance(v, (int, float)) for v in span) and 0 < span[0] < span[1]):
                options['scan_range'] = (float(span[0]), float(span[1]))
            else:
                errors.append(('scan_range', f"expected [lo, hi] with 0 < lo < hi, got {span!r}"))

        for key in ('t', 'rel_tol'):
            value = self._number(run_doc, key, '', errors, exclusive_minimum=0.0)
            if value is not None:
                options[key] = value
        if 'rel_tol' in options and not options['rel_tol'] < 1:
            errors.append(('rel_tol', f"must lie in (0, 1): {options['rel_tol']}"))
        for key in ('method', 'out'):
            if run_doc.get(key) is not None:
                options[key] = str(run_doc[key])
        return options

    @staticmethod
    def _decode(text: str) -> Any:
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise SchemaError([('', f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}")])


def parse_config(text: str, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    return ModelConfigProcessor().parse_config(text, overrides)


def parse_model(text: str) -> LevyModel:
    processor = ModelConfigProcessor()
    return processor.parse_model(processor._decode(text))
