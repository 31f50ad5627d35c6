//! Length spectrum of the modular surface, from class numbers of indefinite
//! binary quadratic forms, with a brute-force conjugacy-class oracle.

mod brute;
mod forms;
mod modular;
mod pell;

pub use brute::{brute_force_spectrum, conjugacy_classes, primitive_root};
pub use forms::{narrow_class_number, reduced_forms, reduction_cycles, Form};
pub use modular::{
    class_count_for_trace, eigenvalue, enumerate_spectrum, max_trace, primitive_length,
    trace_class, trace_classes, TraceClass,
};
pub use pell::pell4_fundamental;
