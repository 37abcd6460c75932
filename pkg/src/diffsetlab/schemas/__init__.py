"""JSON Schemas for every CLI subcommand's stdout document."""
import json
from importlib import resources

NAMES = ("find-dilate", "find-poly", "square-ap", "sumset-ap", "prove", "sweep", "threshold", "gen")


def load_schema(name: str) -> dict:
    return json.loads(resources.files(__name__).joinpath(f"{name}.json").read_text())
