#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

import json
import os
from typing import Any

def get_example_data(identifier: str) -> Any:
    try:
        with open(_get_example_file(), 'r') as file:
            data = json.load(file)
    except (OSError, json.JSONDecodeError):
        raise ValueError("The example data file (example_data.json) is missing or not valid JSON.")

    value = data.get(identifier)
    if value is not None:
        return value
    raise ValueError(f"No example named {identifier!r} in example_data.json; choose from {', '.join(sorted(data))}.")


def _get_example_file() -> str:
    script_dir = os.path.dirname(os.path.abspath(__file__))
    return os.path.join(script_dir, 'example_data.json')
