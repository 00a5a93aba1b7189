"""Engine error codes shared across query-facing modules."""


class EngineError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


POINT_INSIDE_OBSTACLE = "POINT_INSIDE_OBSTACLE"
OUT_OF_BBOX = "OUT_OF_BBOX"
WRONG_MODE = "WRONG_MODE"
EMPTY_POINT_SET = "EMPTY_POINT_SET"
INDEX_TOO_LARGE = "INDEX_TOO_LARGE"
