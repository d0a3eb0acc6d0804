//! Workspace acceptance criteria. The checks live in `tests/acceptance.rs`;
//! each prints one `criterion N ...: PASS|FAIL` line to standard error.
