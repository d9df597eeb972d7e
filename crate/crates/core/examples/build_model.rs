//! Assembles a coupled model through the library API, without the text
//! format, and checks it.

use avmc::checker::{holds, parse_ctl, KripkeStructure};
use avmc::coupled::{
    check_approach_alignment, check_mapping, check_synchronization, AnnotatedBehavior, Annotation, Approach,
    ApproachPartition, CoupledModel, MappingProcess, Role,
};
use avmc::lts::{Behavior, Label, Path, StateId, Transition};

fn s(n: &str) -> StateId {
    StateId::new(n).unwrap()
}

fn l(n: &str) -> Label {
    Label::new(n).unwrap()
}

fn main() {
    let quarantine = Transition::new(s("Suspect"), l("isolate"), s("Quarantined"));
    let preventive = Behavior::from_transitions(
        [s("Watch"), s("Suspect"), s("Quarantined")],
        s("Watch"),
        [Transition::new(s("Watch"), l("flag"), s("Suspect")), quarantine.clone()],
        [s("Quarantined")],
    )
    .unwrap();
    let preventive = AnnotatedBehavior::new(
        preventive,
        ["isolated".to_string()],
        [(quarantine, Annotation { event: Some("isolated".into()), action: Some(Approach::Removal) })],
    )
    .unwrap();

    let control = Behavior::from_transitions(
        [s("Run"), s("Stop")],
        s("Run"),
        [Transition::new(s("Run"), l("halt"), s("Stop"))],
        [s("Stop")],
    )
    .unwrap();

    let mut mapping = MappingProcess::new();
    mapping.map(s("Run"), [Path::new(vec![s("Watch"), s("Suspect")], vec![l("flag")]).unwrap()]);
    mapping.map(s("Stop"), [Path::single(s("Quarantined"))]);

    let mut approaches = ApproachPartition::new();
    approaches
        .add(Approach::Removal, Role::Control, s("Stop"))
        .add(Approach::Removal, Role::Preventive, s("Quarantined"));

    let model = CoupledModel::build(preventive, AnnotatedBehavior::plain(control), mapping, approaches, "quarantine")
        .expect("names resolve");

    for r in [check_mapping(&model), check_approach_alignment(&model), check_synchronization(&model)] {
        println!("{}: {}", r.check, r.status());
    }
    let k = KripkeStructure::from_model(&model, Role::Preventive);
    let f = parse_ctl("AG (at(Suspect) -> AF in(Removal))").unwrap();
    println!("{f}: {}", holds(&k, &f).unwrap());
}
