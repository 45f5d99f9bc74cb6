from .result_exporter import ResultExporter, CSV_SCHEMA_VERSION, render_csv, render_json, to_builtin

__all__ = ['ResultExporter', 'CSV_SCHEMA_VERSION', 'render_csv', 'render_json', 'to_builtin']
