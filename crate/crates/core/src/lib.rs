pub mod atlas;
pub mod dcsearch;
pub mod exactcover;
pub mod factorlib;
pub mod permgroup;
