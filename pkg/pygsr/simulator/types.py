from __future__ import annotations
from typing import Literal

SimulationMode = Literal["message_passing", "closed_form", "centralized"]
SimulationMode.__doc__ = """
The execution model of the distributed iteration.

- **message_passing**: Every node keeps a table with the freshest error of every sensor it has
  heard of. In each time step, nodes send their tables to all neighbors, messages arrive one time
  step later and receivers keep the freshest entry per sensor.
- **closed_form**: Every node directly reads the sensor errors delayed by the hop distances from
  a shared history. Produces exactly the same estimates as message passing.
- **centralized**: Every node reads the current sensor errors without any delay. With unit step
  size and no decay, this is iterative least square reconstruction.
"""
