"""Network functional compression by characteristic-graph coloring."""

from .bench import measure_offline, measure_online, sweep
from .chargraph import (
    CharacteristicGraph,
    Coloring,
    build_characteristic_graph,
    chromatic_entropy,
    compression_rate,
    greedy_color,
)
from .codec import DecoderLut, Encoder, Frame, build_decoder_lut, build_encoder, decode, encode, pack_frame, unpack_frame
from .functions import (
    OutcomeTable,
    PidGains,
    TargetFunction,
    build_outcome_table,
    decompose_pid,
    eval_mod_sum,
    eval_pid,
    mod_sum_alphabets,
    mod_sum_function,
)
from .pipeline import (
    CompiledPipeline,
    PipelineConfig,
    compile_cascaded,
    compile_pipeline,
    compile_simple,
    default_config,
    run_batch,
    run_sample,
)
from .plant import TankParams, Trajectory, calibrate_ranges, run_closed_loop, step_tank, tracking_error
from .quantization import Alphabet, Quantizer, build_quantizer, dequantize, quantize

__version__ = "0.1.0"
