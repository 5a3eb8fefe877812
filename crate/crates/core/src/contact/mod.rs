//! Contact structures on type-A Lie poset algebras.

pub mod classify;
pub mod gluing;
pub mod sequence;

pub use classify::{
    classify_h2, contact_form, cycle_obstruction, disconnected_contact_form, expected_kernel, is_contact,
    kernel_is_expected, verify_contact_form, Certificate, Classification, ContactVerdict, Obstruction,
};
pub use gluing::{
    apply_gluing, index_contribution, valid_steps, Attach, BuildingBlock, Gluing, GluingRule, GluingStep, StepLabels,
};
pub use sequence::{
    build_contact_form, enumerate_contact_sequences, find_contact_sequence, find_contact_sequence_with_map,
    ContactSequence, GeneratedSequence, Replay,
};
