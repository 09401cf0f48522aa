"""
Data export functionality for CSV and JSON formats
"""

import json
import math
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from data.models import LevyModel, CheckReport, ScalingReport
from app_config import OUTPUT_SIGNIFICANT_DIGITS

FLOAT_FORMAT = f'%.{OUTPUT_SIGNIFICANT_DIGITS}g'


class ExportError(Exception):
    """Custom exception for export errors"""
    pass


def _json_safe(value: Any) -> Any:
    """Replace non-finite floats by their string names so the output stays strict JSON"""
    if isinstance(value, float) and not math.isfinite(value):
        return 'nan' if math.isnan(value) else ('inf' if value > 0 else '-inf')
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


class ExportManager:
    """Writes exponent tables, density sweeps, check reports and scaling reports"""

    def __init__(self, model: Optional[LevyModel] = None):
        """
        Initialize export manager

        Args:
            model: Model recorded in the metadata header of every CSV
        """
        self.model = model

    def _metadata(self, title: str, columns: Dict[str, str], extra: Sequence[str] = ()) -> str:
        lines = [f'# {title}']
        if self.model is not None:
            lines.append(f'# model: {json.dumps(_json_safe(self.model.to_dict()), sort_keys=True)}')
        lines.extend(f'# {line}' for line in extra)
        lines.append('# columns:')
        lines.extend(f'# {name} - {description}' for name, description in columns.items())
        return '\n'.join(lines) + '\n'

    def _write(self, text: str, filename: Optional[str]) -> str:
        if filename:
            with open(filename, 'w', encoding='utf-8', newline='') as f:
                f.write(text)
            return filename
        return text

    def frame_to_csv(self,
                     df: pd.DataFrame,
                     title: str,
                     columns: Dict[str, str],
                     filename: Optional[str] = None,
                     extra: Sequence[str] = (),
                     include_metadata: bool = True) -> str:
        """
        Serialize a frame at 17 significant digits

        Returns:
            CSV data as string or filename if saved to file
        """
        try:
            if df.empty:
                raise ExportError(f"No rows to export for {title}")
            body = df.to_csv(index=False, float_format=FLOAT_FORMAT, na_rep='nan', lineterminator='\n')
            text = (self._metadata(title, columns, extra) + body) if include_metadata else body
            return self._write(text, filename)
        except Exception as e:
            if isinstance(e, ExportError):
                raise
            raise ExportError(f"Error exporting {title} to CSV: {str(e)}")

    def export_exponents_to_csv(self,
                                grid: Sequence[float],
                                values: Dict[str, Sequence[float]],
                                filename: Optional[str] = None) -> str:
        """Exponent table: the argument followed by one column per requested function"""
        data = {'x': list(grid)}
        data.update({name: list(column) for name, column in values.items()})
        columns = {'x': 'argument'}
        columns.update({name: f'{name} evaluated at x' for name in values})
        return self.frame_to_csv(pd.DataFrame(data), 'Laplace exponent table', columns, filename)

    def export_densities_to_csv(self,
                                rows: List[Dict[str, Any]],
                                t: float,
                                method: str,
                                filename: Optional[str] = None) -> str:
        """Density sweep at fixed t; column set depends on the method"""
        df = pd.DataFrame(rows)
        columns = {name: DENSITY_COLUMNS.get(name, name) for name in df.columns}
        return self.frame_to_csv(df, 'Transition density sweep', columns, filename,
                                 extra=(f't: {t!r}', f'method: {method}'))

    def export_check_reports(self,
                             reports: List[CheckReport],
                             summary: Dict[str, Any],
                             filename: Optional[str] = None) -> str:
        """JSON document {"summary": ..., "reports": [...]} in catalog order"""
        try:
            document = {'summary': summary, 'reports': [r.to_dict() for r in reports]}
            if self.model is not None:
                document['model'] = self.model.to_dict()
            text = json.dumps(_json_safe(document), indent=2, sort_keys=True) + '\n'
            return self._write(text, filename)
        except Exception as e:
            raise ExportError(f"Error exporting check reports: {str(e)}")

    def export_scaling_report(self, report: ScalingReport, filename: Optional[str] = None) -> str:
        """JSON scaling report"""
        try:
            document = report.to_dict()
            if self.model is not None:
                document['model'] = self.model.to_dict()
            text = json.dumps(_json_safe(document), indent=2, sort_keys=True) + '\n'
            return self._write(text, filename)
        except Exception as e:
            raise ExportError(f"Error exporting scaling report: {str(e)}")


DENSITY_COLUMNS = {
    'x': 'spatial argument',
    'p_asym': 'saddle-point asymptotic density',
    'hardness': 't w^2 phi\'\'(w) at the saddle point',
    'w': 'saddle point',
    'p_oracle': 'density by contour inversion',
    'err_bound': 'error bound of the inversion',
    'contour_w': 'abscissa of the inversion contour',
    'nodes_used': 'quadrature nodes used',
    'regime': 'envelope regime',
    'envelope_value': 'three-regime envelope without constants',
    'ratio_oracle_env': 'p_oracle / envelope_value',
    'ratio_oracle_asym': 'p_oracle / p_asym',
}


def read_csv(path_or_buffer) -> pd.DataFrame:
    """Read back an exported CSV at full precision"""
    return pd.read_csv(path_or_buffer, comment='#', float_precision='round_trip')
