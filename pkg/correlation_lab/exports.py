"""
Writers for reports: CSV and JSON to any text stream, XLSX to a file.

Output depends only on the report, so two runs with the same seed
produce identical CSV and JSON bytes.
"""
import csv
import json
import logging

from openpyxl import Workbook
from openpyxl.styles import Alignment, Font, PatternFill
from openpyxl.utils import get_column_letter

from .exceptions import DomainError

logger = logging.getLogger(__name__)

CSV = 'csv'
JSON = 'json'
XLSX = 'xlsx'

OUTPUT_FORMATS = (
    (CSV, 'Comma separated values'),
    (JSON, 'JSON document'),
    (XLSX, 'Excel workbook'),
)


def _cell(value):
    if isinstance(value, (list, tuple)):
        return ' '.join(str(v) for v in value)
    if isinstance(value, dict):
        return json.dumps(value, sort_keys=True)
    return value


def summary_rows(report):
    return [[key, _cell(value)] for key, value in report.summary.items()]


def write_csv(report, stream):
    """
    One block per table, headed by a ``# name`` line; a single-table
    report is a plain CSV file.
    """
    writer = csv.writer(stream, lineterminator='\n')
    several = len(report.tables) > 1
    for index, table in enumerate(report.tables):
        if several:
            if index:
                stream.write('\n')
            stream.write(f'# {table.name}\n')
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_cell(value) for value in row])


def write_json(report, stream):
    json.dump(report.as_dict(), stream, indent=2)
    stream.write('\n')


def write_xlsx(report, path):
    wb = Workbook()
    wb.remove(wb.active)

    header_fill = PatternFill(start_color="4F46E5", end_color="4F46E5", fill_type="solid")
    header_font = Font(bold=True, color="FFFFFF", size=11)

    sheets = [(table.name, table.columns, table.rows) for table in report.tables]
    sheets.append(('summary', ['key', 'value'], summary_rows(report)))
    for name, columns, rows in sheets:
        ws = wb.create_sheet(title=name[:31])
        for col, heading in enumerate(columns, start=1):
            cell = ws.cell(row=1, column=col, value=heading)
            cell.font = header_font
            cell.fill = header_fill
            cell.alignment = Alignment(horizontal='center', vertical='center')
            ws.column_dimensions[get_column_letter(col)].width = max(14, len(str(heading)) + 4)
        for r, row in enumerate(rows, start=2):
            for col, value in enumerate(row, start=1):
                ws.cell(row=r, column=col, value=_cell(value))
        ws.freeze_panes = 'A2'

    wb.properties.creator = 'correlation_lab'
    wb.save(path)
    logger.info(f'Wrote {len(sheets)} sheets to {path}')


def write_report(report, output_format, stream=None, path=None):
    """Dispatch on format; XLSX needs ``path``, the text formats a stream."""
    if output_format == XLSX:
        if path is None:
            raise DomainError('XLSX output needs --out')
        write_xlsx(report, path)
    elif output_format == JSON:
        write_json(report, stream)
    elif output_format == CSV:
        write_csv(report, stream)
    else:
        raise DomainError(f'Unknown output format {output_format!r}')
