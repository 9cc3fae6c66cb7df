"""Fleet-vs-baseline comparison matrix and its reports."""

from src.compare.matrix import (
    ComparisonMatrix,
    ComparisonResult,
    MatrixCell,
    MissingCell,
    compare_cell,
    fleet_cell,
    full_matrix,
)
from src.compare.report import (
    CellReport,
    ComparisonReport,
    build_report,
    render_table,
    report_summary,
    write_comparison_csv,
    write_figure_csv,
)

__all__ = [
    "ComparisonMatrix",
    "ComparisonResult",
    "MatrixCell",
    "MissingCell",
    "compare_cell",
    "fleet_cell",
    "full_matrix",
    "CellReport",
    "ComparisonReport",
    "build_report",
    "render_table",
    "report_summary",
    "write_comparison_csv",
    "write_figure_csv",
]
