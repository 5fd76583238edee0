from typing import List, Optional


class SimulationError(Exception):
    pass


class ConfigError(SimulationError):
    def __init__(self, message: str, errors: Optional[List[str]] = None) -> None:
        self.errors = list(errors) if errors else [message]
        super().__init__(message)

    def __str__(self) -> str:
        if self.errors == [self.args[0]]:
            return super().__str__()
        lines = "\n".join(f"  - {e}" for e in self.errors)
        return f"{super().__str__()}\n{lines}"


class TopologyError(SimulationError):
    pass


class ScheduleError(SimulationError):
    pass


class ChannelError(SimulationError):
    pass


class EstimationError(SimulationError):
    pass


class TargetUnachievableError(SimulationError):
    def __init__(self, target: float, ceiling: float) -> None:
        self.target = target
        self.ceiling = ceiling
        super().__init__(
            f"SINR target {target:.4g} exceeds the large-array ceiling {ceiling:.4g}"
        )


class InsufficientSamplesError(SimulationError):
    pass


class UnknownPresetError(SimulationError):
    pass


class DropError(SimulationError):
    def __init__(self, drop_index: int, cause: Exception) -> None:
        self.drop_index = drop_index
        self.cause = cause
        super().__init__(f"drop {drop_index}: {cause}")
