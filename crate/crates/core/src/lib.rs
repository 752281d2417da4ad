pub mod polyring;
pub mod groebner;
pub mod hf_builder;
pub mod quotient;
pub mod linalg;
pub mod rootfind;
pub mod qblock;
