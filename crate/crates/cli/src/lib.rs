//! Library half of the `shimura` command: report rendering shared by the
//! binary and its tests.

pub mod render;

pub use render::OutputFormat;

/// Environment variable naming the class-number cache file; takes
/// precedence over `--cache`.
pub const CACHE_ENV: &str = "SHIMURA_CLASS_CACHE";

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const VERDICT_FAIL: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const INTERNAL: u8 = 3;
}
