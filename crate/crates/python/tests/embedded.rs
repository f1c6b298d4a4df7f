use pykneser::pykneser;
use pyo3::prelude::*;

#[test]
fn module_runs_under_embedded_interpreter() {
    pyo3::append_to_inittab!(pykneser);
    Python::initialize();
    Python::attach(|py| {
        let code = c"
import pykneser as pk
g = pk.kneser_graph(5, 2)
assert g.critical_group().invariant_factors == [2, 10, 10, 10]
assert pk.smith_normal_form([[2, 4], [6, 8]]).diagonal == [2, 4]
assert pk.critical_group_order(7) == pk.spanning_tree_count(pk.kneser_graph(7, 2))
assert pk.select_branch(10, 3) == 'Case 2a, a=2'
try:
    pk.kernel_dimension_mod([[1]], 6, 1)
    raise SystemExit('expected ValueError')
except ValueError:
    pass
";
        py.run(code, None, None).unwrap();
    });
}
