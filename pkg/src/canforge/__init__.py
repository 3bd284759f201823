"""DroneCAN (UAVCAN v0) frame toolkit and labeled intrusion-dataset synthesizer.

Layers, bottom up: frame (CAN 2.0B model and the 29-bit ID codecs), crc and
transfer (tail bytes, segmentation, reassembly), attacks (flooding, fuzzy,
replay generators), traffic (normal bus synthesis), scenarios (the ten
canned timelines and labeled stream assembly), dataset (file formats), and
analysis (summaries plus a baseline frequency detector).  The cli module
exposes all of it as the `canforge` command.
"""

from .analysis import (
    AlarmWindow,
    DatasetSummary,
    DetectionScore,
    detect_frequency,
    evaluate_detection,
    summarize,
)
from .attacks import (
    DEFAULT_TARGET_ID,
    AttackConfig,
    AttackKind,
    Fidelity,
    RecordedTape,
    TapeEntry,
    attack_stream,
    capture_tape,
    flooding_stream,
    fuzzy_stream,
    injection_count,
    replay_stream,
)
from .dataset import (
    export_candump,
    load_tape,
    read_candump,
    read_labeled,
    scan_labeled,
    write_labeled,
)
from .errors import (
    BadHexError,
    BadLabelError,
    CanForgeError,
    DataTooLongError,
    DlcMismatchError,
    EmptyDatasetError,
    EmptyTapeError,
    FieldOverflowError,
    FormatError,
    IdOutOfRangeError,
    InvalidSourceError,
    MalformedLineError,
    MissingTapeError,
    PayloadTooLongError,
    UnknownScenarioError,
    WrongFrameKindError,
)
from .crc import crc16_ccitt, transfer_crc
from .frame import (
    AnonymousMessageId,
    CanFrame,
    FrameId,
    MessageId,
    ServiceId,
    decode_can_id,
    encode_can_id,
    make_frame,
)
from .scenarios import (
    Label,
    LabeledFrame,
    LabelMode,
    ScenarioSpec,
    builtin_scenario,
    run_scenario,
)
from .traffic import (
    DEFAULT_PROFILE,
    FlightTimeline,
    PhaseMultipliers,
    TrafficEntry,
    TrafficProfile,
    leftward_command_tape,
    normal_stream,
)
from .transfer import (
    RAW_COMMAND_SIGNATURE,
    RAW_COMMAND_TYPE_ID,
    Reassembler,
    ReassemblyError,
    ReassemblyErrorKind,
    TailByte,
    Transfer,
    decode_tail,
    encode_tail,
    reassemble,
    split_transfer,
)

__version__ = "0.1.0"
