//! C ABI surface.
