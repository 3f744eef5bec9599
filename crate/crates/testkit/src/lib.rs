//! Seeded society generators and brute-force reference oracles used to
//! validate `oppwelfare`.

pub mod fixtures;
pub mod generate;
pub mod oracle;

pub use generate::{
    generate, generate_many, generate_pair_with_known_relation, ExpectedRelation, KnownPair, PairKind,
    SocietyGenerator, SocietyProfile,
};
pub use oracle::{
    naive_cgf, naive_tilt, naive_welfare, oracle_finite_difference, oracle_variational_grid, type_utilities,
    weighted_mass_at, FdTarget, GridMinimum, OracleError,
};
