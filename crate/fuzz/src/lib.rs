#![allow(dead_code)]
include!("harness.rs");
