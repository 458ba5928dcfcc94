#![allow(clippy::needless_range_loop)]

pub mod counting;
pub mod error;
pub mod delta;
pub mod field;
pub mod form;
pub mod green;
pub mod numeric;
pub mod pdo;
pub mod padic;
pub mod poly;
pub mod powers;
pub mod qfunc;
pub mod radical;
pub mod ratfunc;
pub mod riesz;
pub mod zeta;
