//! Analysis layer (placeholder during bring-up).
