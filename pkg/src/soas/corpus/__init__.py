"""Bundled signature and proof-script files."""

from importlib import resources


def names():
    return sorted(p.name for p in resources.files(__name__).iterdir()
                  if p.name.endswith((".soas", ".eqp")))


def has(name: str) -> bool:
    return name in names()


def read(name: str) -> str:
    return resources.files(__name__).joinpath(name).read_text(encoding="utf-8")


def load(name: str):
    """Parse a bundled ``.soas`` file into a Signature."""
    from ..signature import parse_spec
    return parse_spec(read(name), source=name)
