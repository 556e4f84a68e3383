//! Spectral-and-nilpotent ordering of square complex matrices.
//!
//! Matrices are ranked first by weak majorization of their lex-sorted
//! eigenvalues and, on equal spectra, by dominance of the Jordan block
//! partitions at each eigenvalue. Gershgorin-type and rank-power certificates
//! decide the order without diagonalizing, and the stability module uses the
//! order to rank stable linear time-invariant systems by the asymptotic decay
//! of `‖e^{tA}‖`.

pub mod certificates;
pub mod error;
pub mod matrix;
pub mod order;
pub mod spectra;
pub mod stability;

pub use certificates::{
    gershgorin_disks, nilpotent_rank_cert, perturbed_radius_bound, robust_spectral_cert,
    spectral_cert, CertificateMode, CertificateResult, CertificateStatus, Disk, IndexCheck,
    NilpotentCertificate, RankRow,
};
pub use error::{Result, SnoError};
pub use matrix::DenseMatrix;
pub use num_complex::Complex64;
pub use order::{
    dominance_compare, lex_compare, nilpotent_compare, sno_compare, sort_desc_lex, weak_majorize,
    Branch, Partition, Relation, SnoVerdict, Verdict, DEFAULT_LEX_TOL,
};
pub use spectra::{
    cluster_spectrum, eigenvalues, jordan_partition, rank_of_shifted_power, rank_sequence,
    sno_representation, Eigenvalue, SnoRepresentation, Spectrum, Tolerances,
};
pub use stability::{
    crossing_time, envelope, is_stable, matrix_exponential, spectral_abscissa, stability_compare,
    stability_order,
    transient_peak, Envelope, Peak, Spacing, StabilityReport, StabilityVerdict, TimeGrid,
};
