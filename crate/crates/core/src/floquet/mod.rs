//! Ideal π/2-pulse sequences, their toggling-frame averages, and driven
//! evolution including the echo protocol.

mod average;
mod drive;
mod echo;
mod pauli_sum;
mod sequence;

pub use average::{frame_hamiltonian, toggling_average, AverageFactors, ToggleFrameAverage};
pub use drive::{apply_global_pulse, lab_hamiltonian, simulate_driven, DrivenSystem};
pub use echo::{simulate_echo_protocol, EchoProtocolConfig, EchoRunner};
pub use pauli_sum::PauliSum;
pub use sequence::{
    modified_sequence, wahuha_sequence, Frame, FrameMap, Pulse, PulseAxis, PulseSequence, SignedAxis,
};
