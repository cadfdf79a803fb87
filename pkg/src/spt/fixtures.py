"""Bundled fixtures: the 11-switch reference topology, policies and scenarios."""
from importlib import resources


def path(name):
    return resources.files(__package__).joinpath("data", name)


def read(name):
    return path(name).read_text(encoding="utf-8")
