//! Certificates: data model, TRS and JSON formats, and the checking pipeline.

mod check;
mod model;
mod trs_format;

pub use check::{check, check_with, match_entry, RejectReason, Rejection, Verdict};
pub use model::{
    parse_certificate, Certificate, CertificateError, Mode, PeakEntry, RelTermEvidence, SideSpec,
    StepDir, StepSpec,
};
pub use trs_format::{parse_term, parse_trs, write_trs, TrsParseError};
