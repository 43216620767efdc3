"""Star-word, set-list and simplex fixtures shipped with the package."""

from importlib import resources


def path(name: str):
    return resources.files(__name__) / name


def read(name: str) -> str:
    return path(name).read_text(encoding="utf-8")


def names() -> list[str]:
    return sorted(p.name for p in resources.files(__name__).iterdir()
                  if p.name.endswith((".boxes", ".sets", ".simplices")))
