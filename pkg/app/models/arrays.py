import numpy as np


def readonly_array(value, dtype=float) -> np.ndarray:
    """Copy into a 1-D array that cannot be mutated through the model."""
    array = np.array(value, dtype=dtype, copy=True).reshape(-1)
    array.setflags(write=False)
    return array


def strictly_increasing(values: np.ndarray) -> bool:
    return bool(np.all(np.diff(values) > 0))
