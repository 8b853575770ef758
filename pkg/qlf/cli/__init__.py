from .config import Settings, resolve_settings
from .main import build_parser, main, run
from .reports import RunReport, published_schema, report_schema

__all__ = ["Settings", "resolve_settings", "build_parser", "main", "run", "RunReport", "published_schema", "report_schema"]
