//! Support shared by the integration tests and the acceptance harness.
#![allow(dead_code)]

pub mod corpus;
pub mod oracle;
