//! Closed-form solutions of the recurrence systems behind every operator family,
//! together with brute-force verifiers used as oracles.

mod kseq;
mod sequences;
mod single;
mod two_index;

pub use kseq::{
    k_additive_at, k_closed_additive, k_closed_shifted, k_shifted_at, shifted_correction,
    verify_k_recurrence, KSeqAdditiveParams,
    KSeqShiftedParams, KSolution, XiTable,
};
pub use sequences::{IndexSet, Sequence, Slot, SlotValues};
pub use single::{closed_single, verify_single, IndexedSeq, SingleRecParams};
pub use two_index::{closed_two_index, verify_two_index, TwoIndexRecParams, TwoIndexTable};
