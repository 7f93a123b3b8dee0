use std::ffi::CString;
use std::path::Path;

use pyo3::prelude::*;
use strongstable_py::strongstable_module;

#[test]
fn python_smoke_script_passes() {
    let script = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../python/smoke_test.py");
    let source = std::fs::read_to_string(&script).unwrap();
    pyo3::append_to_inittab!(strongstable_module);
    Python::initialize();
    Python::attach(|py| {
        let module = PyModule::from_code(
            py,
            &CString::new(source).unwrap(),
            c"smoke_test.py",
            c"smoke_test",
        )
        .unwrap();
        let found = module.getattr("ss").unwrap().getattr("__name__").unwrap();
        assert_eq!(found.extract::<String>().unwrap(), "strongstable");
        module.getattr("main").unwrap().call0().unwrap();
    });
}
