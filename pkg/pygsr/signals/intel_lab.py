from __future__ import annotations
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple, Union
import numpy as np
import pandas as pd
import torch
from .synthetic import TimeVaryingSignal

logger = logging.getLogger(__name__)

#: The columns of the published Intel Berkeley Research Lab readings.
COLUMNS = ["date", "time", "epoch", "mote", "temperature", "humidity", "light", "voltage"]

Timestamp = Union[str, pd.Timestamp]


@dataclass(frozen=True)
class IntelLabData:
    """
    Temperature readings of the Intel Berkeley Research Lab motes on a uniform time grid.
    """

    #: The locations of the included motes, tensor of shape ``[num_motes, 2]``.
    points: torch.Tensor
    #: The temperature signal, frame ``k`` holds the readings at ``timestamps[k]``.
    signal: TimeVaryingSignal
    #: The ids of the included motes. Vertex ``i`` corresponds to ``mote_ids[i]``.
    mote_ids: List[int]
    #: The time grid.
    timestamps: pd.DatetimeIndex
    #: Motes with a known location but without any reading in the time window.
    excluded_motes: List[int]
    #: The number of rows that could not be parsed.
    num_malformed: int


def read_mote_locations(path: Union[str, Path]) -> pd.DataFrame:
    """
    Reads the mote locations file with whitespace-separated lines ``moteid x y``.

    Args:
        path: The file to read.

    Returns:
        Data frame indexed by mote id with columns ``x`` and ``y``, sorted by mote id.
    """
    if not Path(path).exists():
        raise FileNotFoundError(f"mote locations file '{path}' does not exist")
    locations = pd.read_csv(path, sep=r"\s+", header=None, names=["mote", "x", "y"])
    return locations.set_index("mote").sort_index()


def _read_readings(path: Path) -> Tuple[pd.DataFrame, int]:
    with path.open(encoding="utf-8", errors="replace") as f:
        num_rows = sum(1 for line in f if line.strip())

    raw = pd.read_csv(
        path,
        sep=r"\s+",
        header=None,
        names=COLUMNS,
        dtype={"date": str, "time": str},
        engine="c",
        on_bad_lines="skip",
        encoding_errors="replace",
    )
    dates = pd.to_datetime(raw["date"], format="%Y-%m-%d", errors="coerce")
    timestamps = dates + pd.to_timedelta(raw["time"], errors="coerce")
    readings = pd.DataFrame(
        {
            "time": timestamps,
            "mote": pd.to_numeric(raw["mote"], errors="coerce"),
            "temperature": pd.to_numeric(raw["temperature"], errors="coerce"),
        }
    )
    readings = readings[np.isfinite(readings["temperature"])].dropna()
    readings["mote"] = readings["mote"].astype(np.int64)
    return readings, num_rows - len(readings)


def _fill_spatially(values: torch.Tensor, points: torch.Tensor) -> torch.Tensor:
    # Gaps are filled from the closest mote with a reading at the same time, never from filled
    # values
    distances = torch.cdist(points, points, compute_mode="donot_use_mm_for_euclid_dist")
    order = distances.sort(dim=1, stable=True).indices
    filled = values.clone()
    for mote in range(values.size(1)):
        missing = filled[:, mote].isnan()
        for neighbor in order[mote, 1:].tolist():
            if not missing.any():
                break
            available = missing & ~values[:, neighbor].isnan()
            filled[available, mote] = values[available, neighbor]
            missing &= ~available
    return filled


def load_intel_lab(
    path: Union[str, Path],
    locations: Union[str, Path],
    start_time: Timestamp,
    end_time: Timestamp,
    resample_seconds: int = 30,
    temperature_range: Optional[Tuple[float, float]] = None,
) -> IntelLabData:
    """
    Loads the temperature channel of the Intel Berkeley Research Lab data. Readings are resampled
    per mote onto a uniform grid by linear interpolation in time. Grid points outside of a mote's
    readings take the value of the spatially closest mote with a reading at that time, remaining
    gaps (times without any reading) are filled with the closest preceding or following value.

    Args:
        path: The readings file with whitespace-separated lines
            ``date time epoch moteid temperature humidity light voltage``.
        locations: The mote locations file, see :meth:`read_mote_locations`.
        start_time: The first time of the grid (inclusive).
        end_time: The last possible time of the grid (inclusive).
        resample_seconds: The grid spacing.
        temperature_range: If provided, readings outside of this range are discarded as sensor
            malfunctions.

    Returns:
        The readings on the grid. Motes without readings in the window are excluded.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Intel Lab readings file '{path}' does not exist")
    if resample_seconds <= 0:
        raise ValueError(f"resampling interval must be positive but is {resample_seconds}")
    start, end = pd.Timestamp(start_time), pd.Timestamp(end_time)

    logger.info("Loading Intel Lab readings from '%s'...", path)
    readings, num_malformed = _read_readings(path)
    if num_malformed > 0:
        logger.warning("Skipped %d malformed rows.", num_malformed)

    readings = readings[(readings["time"] >= start) & (readings["time"] <= end)]
    if readings.empty:
        raise ValueError(f"no rows in range [{start}, {end}]")
    if temperature_range is not None:
        low, high = temperature_range
        plausible = readings["temperature"].between(low, high)
        if not plausible.all():
            logger.warning(
                "Discarded %d readings outside of [%g, %g].", int((~plausible).sum()), low, high
            )
        readings = readings[plausible]

    mote_locations = read_mote_locations(locations)
    unknown = sorted(set(readings["mote"].unique()) - set(mote_locations.index))
    if unknown:
        logger.warning("Ignoring readings of motes without location: %s.", unknown)
    grouped = dict(tuple(readings.groupby("mote")))
    mote_ids = [int(mote) for mote in mote_locations.index if mote in grouped]
    excluded = [int(mote) for mote in mote_locations.index if mote not in grouped]
    if excluded:
        logger.warning("Excluding motes without readings in the time window: %s.", excluded)
    if not mote_ids:
        raise ValueError(f"no located mote has readings in range [{start}, {end}]")

    grid = pd.date_range(start, end, freq=pd.Timedelta(seconds=resample_seconds))
    columns = {}
    for mote in mote_ids:
        series = grouped[mote].groupby("time")["temperature"].mean()
        combined = series.reindex(series.index.union(grid))
        columns[mote] = combined.interpolate(method="time", limit_area="inside").reindex(grid)
    values = torch.as_tensor(pd.DataFrame(columns).to_numpy(dtype=np.float64))

    points = torch.as_tensor(
        mote_locations.loc[mote_ids, ["x", "y"]].to_numpy(dtype=np.float64)
    )
    filled = _fill_spatially(values, points)
    frames = torch.as_tensor(pd.DataFrame(filled.numpy()).ffill().bfill().to_numpy())

    delta = float((frames[1:] - frames[:-1]).abs().max()) if frames.size(0) > 1 else 0.0
    logger.info(
        "Loaded %d motes over %d time steps of %d seconds.",
        len(mote_ids),
        frames.size(0),
        resample_seconds,
    )
    return IntelLabData(
        points=points,
        signal=TimeVaryingSignal(frames, delta),
        mote_ids=mote_ids,
        timestamps=grid,
        excluded_motes=excluded,
        num_malformed=num_malformed,
    )
