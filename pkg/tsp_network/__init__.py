from . import topology
from . import channel
from . import frame

from .topology import (
    NetworkTopology,
    BsReuseSchedule,
    MsPlacement,
    build_hex_layout,
    valid_group_numbers,
    assign_groups,
    ic_cluster,
    bs_reuse_schedule,
    drop_users,
    hexagon_grid,
    hexagon_second_moment,
)
from .channel import (
    LargeScaleParams,
    CorrelationMatrix,
    ChannelDrop,
    LazyChannels,
    pathloss_gain,
    loyka_matrix,
    sample_ms_bs,
    los_component,
    sample_bs_bs,
    sample_ms_ms,
    sample_large_scale,
)
from .frame import (
    Epoch,
    FrameSchedule,
    validate,
    resource_ratio_tsp,
    resource_ratio_ic,
    bs_pilot_overhead,
    precoder_epoch,
)

__all__ = [
    # Modules
    "topology",
    "channel",
    "frame",
    # Classes
    "NetworkTopology",
    "BsReuseSchedule",
    "MsPlacement",
    "LargeScaleParams",
    "CorrelationMatrix",
    "ChannelDrop",
    "LazyChannels",
    "Epoch",
    "FrameSchedule",
    # Functions
    "build_hex_layout",
    "valid_group_numbers",
    "assign_groups",
    "ic_cluster",
    "bs_reuse_schedule",
    "drop_users",
    "hexagon_grid",
    "hexagon_second_moment",
    "pathloss_gain",
    "loyka_matrix",
    "sample_ms_bs",
    "los_component",
    "sample_bs_bs",
    "sample_ms_ms",
    "sample_large_scale",
    "validate",
    "resource_ratio_tsp",
    "resource_ratio_ic",
    "bs_pilot_overhead",
    "precoder_epoch",
]
