"""Jinja2 renderer for markdown reports."""

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from src.config import REPORT_DECIMALS, TEMPLATES_DIR


def fixed(value, decimals: int = REPORT_DECIMALS) -> str:
    """Fixed-point formatting; None renders as a dash."""
    if value is None:
        return "-"
    text = f"{value:.{decimals}f}"
    # avoid "-0.000000"
    if text.startswith("-") and float(text) == 0.0:
        text = text[1:]
    return text


_env = Environment(
    loader=FileSystemLoader(str(TEMPLATES_DIR)),
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
    undefined=StrictUndefined,
)
_env.filters["fixed"] = fixed


def render_template(template_name: str, **context) -> str:
    """Render a Jinja2 template with the given context."""
    tmpl = _env.get_template(template_name)
    return tmpl.render(**context)
