from .config import RegisterLayout, SynthConfig, bennett
from .field_circuits import (FieldOps, const_mul_circuit, frobenius_circuit, itoh_tsuji_circuit,
                             mastrovito_mul, square_circuit)
from .gadgets import const_matrix_mul, fanout_tree, parity_tree
from .points import point_add_circuit, proj_to_affine
from .qft import aqft_circuit, default_band, dropped_error_bound
from .scalar import (double_scalar_tree, double_scalar_tree_report, leaf_init_circuit,
                     seq_double_add_l2r, seq_double_add_r2l)
from .shor import STAGES, shor_dlog_circuit, stage_reports

__all__ = [
    "RegisterLayout", "SynthConfig", "bennett", "FieldOps", "const_mul_circuit", "frobenius_circuit",
    "itoh_tsuji_circuit", "mastrovito_mul", "square_circuit", "const_matrix_mul", "fanout_tree",
    "parity_tree", "point_add_circuit", "proj_to_affine", "aqft_circuit", "default_band",
    "dropped_error_bound", "double_scalar_tree", "double_scalar_tree_report", "leaf_init_circuit",
    "seq_double_add_l2r", "seq_double_add_r2l", "STAGES", "shor_dlog_circuit", "stage_reports",
]
