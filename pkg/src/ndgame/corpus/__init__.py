"""Game files bundled with the package."""
from importlib import resources


def path(name: str):
    return resources.files(__name__).joinpath(name)


def names() -> list:
    return sorted(
        p.name for p in resources.files(__name__).iterdir()
        if p.name.endswith((".ndg", ".ndmg"))
    )


def load(name: str):
    from ..dsl import parse

    return parse(path(name).read_text(encoding="utf-8"))
