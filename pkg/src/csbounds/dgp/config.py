"""Plain-text DGP configuration.

One ``key = value`` pair per line; ``#`` starts a comment. Keys are
``family``, optional ``q``, ``theta`` and ``copula``, and the family's
parameters, for example::

    family = left_censored_chi2
    c0 = 5
    c1 = 5
    k0 = 5
    k1 = 3
"""

from __future__ import annotations

from .models import DgpSpec

__all__ = ["parse_config", "dump_config", "load_config"]

_TOP = ("family", "q", "theta", "copula")


def parse_config(text: str) -> DgpSpec:
    fields: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value")
        key, val = (part.strip() for part in line.split("=", 1))
        if not key or not val:
            raise ValueError(f"line {lineno}: empty key or value")
        if key in fields:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        fields[key] = val
    if "family" not in fields:
        raise ValueError("config has no family")
    params = {}
    for key, val in fields.items():
        if key in ("family", "copula"):
            continue
        try:
            params[key] = float(val)
        except ValueError:
            raise ValueError(f"{key}: not a number: {val!r}") from None
    kwargs = {k: params.pop(k) for k in ("q", "theta") if k in params}
    return DgpSpec(fields["family"], params, copula=fields.get("copula", "clayton"), **kwargs)


def dump_config(spec: DgpSpec) -> str:
    lines = [f"family = {spec.family}", f"q = {spec.q!r}", f"theta = {spec.theta!r}",
             f"copula = {spec.copula}"]
    lines += [f"{k} = {v!r}" for k, v in sorted(spec.params.items())]
    return "\n".join(lines) + "\n"


def load_config(path) -> DgpSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
