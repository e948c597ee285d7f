from decimal import Decimal, ROUND_HALF_UP

from src.config import settings


def fmt_float(value: float, digits: int = None) -> str:
    """Render a float with enough significant digits to round-trip"""
    digits = digits or settings.output.FLOAT_DIGITS
    return format(float(value), f".{digits}g")


def round_half_away(value: float, decimals: int = 1) -> float:
    """Round half away from zero (the convention used for percentage reports)"""
    quantum = Decimal(1).scaleb(-decimals)
    d = Decimal(repr(value))
    rounded = abs(d).quantize(quantum, rounding=ROUND_HALF_UP)
    return float(rounded if d >= 0 else -rounded)
