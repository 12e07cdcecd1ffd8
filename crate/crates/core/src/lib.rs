pub mod characters;
pub mod config;
pub mod fit;
pub mod group;
pub mod moments;
pub mod primes;
pub mod report;
pub mod splitting;
pub mod verify;
