"""
Testing utilities

Seeded generators for policies, MiniSvc corpora and web service trees, the catalogue
of single-constraint policy mutations, and assertion helpers. Every generator accepts
either a seed or a :class:`numpy.random.Generator` and is deterministic for a given
seed.
"""
from __future__ import annotations

import dataclasses
import datetime as dt
import difflib
import enum
import functools
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Set, Tuple, TypeVar, Union

import numpy as np

from purposegraph._typing import FilePath
from purposegraph.lpl import (
    DataElement,
    DataRecipient,
    InheritanceEdge,
    LayeredPrivacyPolicy,
    Ordering,
    PrivacyModel,
    Purpose,
    RecipientKind,
    Retention,
    RetentionType,
    UnderlyingPurposeEdge,
    retention_compare,
)
from purposegraph.minisvc.nodes import (
    Annotation,
    Call,
    ClassDecl,
    CompilationUnit,
    FieldDecl,
    InterfaceDecl,
    LocalDecl,
    MethodDecl,
    MethodSig,
    New,
    Param,
    Stmt,
)
from purposegraph.minisvc.printer import format_unit
from purposegraph.serialisation import serialize_policy
from purposegraph.servicenet import ServiceNet, Transition, WebService
from purposegraph.validation import Rule

SeedLike = Union[int, np.random.Generator, None]
T = TypeVar("T")

DATA_VOCABULARY: Tuple[DataElement, ...] = tuple(
    DataElement(entity, attribute)
    for entity in ("User", "Order", "Device")
    for attribute in ("email", "name", "location", "id")
)
CONTROLLER_OF_RECORD = DataRecipient("ACME", RecipientKind.CONTROLLER)
RECIPIENT_VOCABULARY: Tuple[DataRecipient, ...] = (
    CONTROLLER_OF_RECORD,
    DataRecipient("Mailer", RecipientKind.PROCESSOR),
    DataRecipient("AdNetwork", RecipientKind.THIRD_PARTY),
)
BASE_DATE = dt.date(2030, 1, 1)
K_ANONYMITY = "k-anonymity"


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _coin(rng: np.random.Generator, p: float = 0.5) -> bool:
    return bool(rng.random() < p)


def _randint(rng: np.random.Generator, low: int, high: int) -> int:
    # inclusive of ``high``
    return int(rng.integers(low, high + 1))


def _pick(rng: np.random.Generator, items: Sequence[T]) -> T:
    return items[int(rng.integers(len(items)))]


def _subset(rng: np.random.Generator, items, p: float = 0.5) -> List:
    return [item for item in sorted(items) if _coin(rng, p)]


def _date(rng: np.random.Generator, latest: Optional[dt.date] = None) -> dt.date:
    if latest is None:
        return BASE_DATE + dt.timedelta(days=_randint(rng, 0, 1000))
    return latest - dt.timedelta(days=_randint(rng, 0, 100))


def _at_most(rng: np.random.Generator, retention: Retention) -> Retention:
    """
    A random retention which is not longer than ``retention``
    """
    if _coin(rng, 0.4):
        return retention

    rtype = retention.rtype
    if rtype == RetentionType.INDEFINITE:
        return _pick(
            rng,
            [
                Retention(RetentionType.AFTER_PURPOSE),
                Retention(RetentionType.AFTER_PURPOSE, _date(rng)),
                Retention(RetentionType.FIXED_DATE, _date(rng)),
            ],
        )
    if rtype == RetentionType.AFTER_PURPOSE:
        if retention.point_in_time is None:
            return Retention(RetentionType.AFTER_PURPOSE, _date(rng))
        if _coin(rng):
            return Retention(
                RetentionType.AFTER_PURPOSE, _date(rng, retention.point_in_time)
            )
        return Retention(RetentionType.FIXED_DATE, _date(rng))

    return Retention(RetentionType.FIXED_DATE, _date(rng, retention.point_in_time))


def _order_key(ordering: Ordering) -> int:
    return {Ordering.LESS: -1, Ordering.EQUAL: 0, Ordering.GREATER: 1}[ordering]


_retention_key = functools.cmp_to_key(
    lambda a, b: _order_key(retention_compare(a, b))
)


def random_policy(
    seed: SeedLike = None, min_purposes: int = 2, max_purposes: int = 8
) -> LayeredPrivacyPolicy:
    """
    Generate a valid policy

    The composition graph is a DAG with at least one edge. Every child's data and
    recipients are drawn from the intersection of its parents', its retention is not
    longer and its ``k-anonymity`` privacy model not weaker than any parent's.
    ``required`` and ``optOut`` are the same for all purposes. Inheritance edges are
    drawn independently, each purpose having at most one parent.

    Parameters
    ----------
    seed
        Seed or random generator

    min_purposes
        Smallest number of purposes, at least 2

    max_purposes
        Largest number of purposes

    Returns
    -------
    :class:`purposegraph.lpl.LayeredPrivacyPolicy`
    """
    rng = _rng(seed)
    n_purposes = _randint(rng, max(2, min_purposes), max(2, min_purposes, max_purposes))
    ids = [f"p{i}" for i in range(n_purposes)]

    # edges only point from lower to higher index, which keeps the graph acyclic
    parents: Dict[int, List[int]] = {i: [] for i in range(n_purposes)}
    for child in range(1, n_purposes):
        parents[child] = [p for p in range(child) if _coin(rng, 0.35)]
    if not any(parents.values()):
        parents[1] = [0]

    required = _coin(rng, 0.8)
    opt_out = _coin(rng, 0.3)

    purposes: List[Purpose] = []
    for i, purpose_id in enumerate(ids):
        own_parents = [purposes[p] for p in parents[i]]
        if own_parents:
            data = set.intersection(*(set(p.data) for p in own_parents))
            recipients = set.intersection(*(set(p.recipients) for p in own_parents))
            retention = _at_most(
                rng, min((p.retention for p in own_parents), key=_retention_key)
            )
            ks = [
                p.privacy_model.attributes["k"]
                for p in own_parents
                if p.privacy_model is not None
            ]
            if ks:
                privacy_model: Optional[PrivacyModel] = PrivacyModel(
                    K_ANONYMITY, {"k": max(ks) + _randint(rng, 0, 3)}
                )
            else:
                privacy_model = _random_privacy_model(rng)
        else:
            data = set(DATA_VOCABULARY)
            recipients = set(RECIPIENT_VOCABULARY)
            retention = _random_retention(rng)
            privacy_model = _random_privacy_model(rng)

        purposes.append(
            Purpose(
                id=purpose_id,
                name=f"Purpose {i}",
                opt_out=opt_out,
                required=required,
                descr=_pick(rng, ["", f"Processing step {i}", "Überprüfung der Daten"]),
                recipients=frozenset(
                    {CONTROLLER_OF_RECORD}
                    | set(_subset(rng, recipients - {CONTROLLER_OF_RECORD}))
                ),
                retention=retention,
                privacy_model=privacy_model,
                data=frozenset(_subset(rng, data, 0.6)),
            )
        )

    composition = frozenset(
        UnderlyingPurposeEdge(ids[p], ids[c]) for c, ps in parents.items() for p in ps
    )
    hierarchy = frozenset(
        InheritanceEdge(ids[_randint(rng, 0, c - 1)], ids[c])
        for c in range(1, n_purposes)
        if _coin(rng, 0.2)
    )
    underlying = ()
    if _coin(rng, 0.3):
        underlying = (
            LayeredPrivacyPolicy(
                name="payments",
                purposes=frozenset({Purpose("billing", "Billing", data={DATA_VOCABULARY[0]})}),
            ),
        )

    return LayeredPrivacyPolicy(
        version="1.0",
        name=f"generated-{n_purposes}",
        lang=_pick(rng, ["en", "de", "en-GB"]),
        pp_uri="https://example.com/privacy",
        underlying_policies=underlying,
        purposes=frozenset(purposes),
        composition=composition,
        hierarchy=hierarchy,
    )


def _random_retention(rng: np.random.Generator) -> Retention:
    return _at_most(rng, Retention(RetentionType.INDEFINITE))


def _random_privacy_model(rng: np.random.Generator) -> Optional[PrivacyModel]:
    if _coin(rng):
        return None
    return PrivacyModel(K_ANONYMITY, {"k": _randint(rng, 2, 10)})


class Mutation(enum.Enum):
    """
    Single-constraint mutations of a composition edge and the rule each one breaks
    """

    ADD_CHILD_DATUM = "add datum to child"
    REMOVE_PARENT_RECIPIENT = "remove recipient from parent"
    RAISE_CHILD_RETENTION = "raise child retention above parent"
    WEAKEN_CHILD_PRIVACY_MODEL = "weaken child privacy model"
    FLIP_CHILD_REQUIRED = "flip child required"
    FLIP_CHILD_OPT_OUT = "flip child optOut"
    ADD_BACK_EDGE = "add back-edge"

    @property
    def rule(self) -> Rule:
        """
        Rule which the mutation breaks
        """
        return _MUTATION_RULES[self]


_MUTATION_RULES = {
    Mutation.ADD_CHILD_DATUM: Rule.DATA_SUBSET,
    Mutation.REMOVE_PARENT_RECIPIENT: Rule.RECIPIENT_SUBSET,
    Mutation.RAISE_CHILD_RETENTION: Rule.RETENTION_ORDER,
    Mutation.WEAKEN_CHILD_PRIVACY_MODEL: Rule.PRIVACY_MODEL_ORDER,
    Mutation.FLIP_CHILD_REQUIRED: Rule.REQUIRED_MISMATCH,
    Mutation.FLIP_CHILD_OPT_OUT: Rule.OPT_OUT_MISMATCH,
    Mutation.ADD_BACK_EDGE: Rule.CYCLE,
}

MUTANT_DATUM = DataElement("Mutant", "datum")


def replace_purposes(
    policy: LayeredPrivacyPolicy, *purposes: Purpose
) -> LayeredPrivacyPolicy:
    """
    Copy of ``policy`` with purposes replaced by id
    """
    replaced = {p.id: p for p in purposes}
    return dataclasses.replace(
        policy,
        purposes=frozenset(replaced.get(p.id, p) for p in policy.purposes),
    )


def _strictly_below(retention: Retention) -> Retention:
    if retention.rtype == RetentionType.INDEFINITE:
        return Retention(RetentionType.AFTER_PURPOSE)
    if retention.rtype == RetentionType.AFTER_PURPOSE:
        if retention.point_in_time is None:
            return Retention(RetentionType.AFTER_PURPOSE, BASE_DATE)
        return Retention(RetentionType.FIXED_DATE, retention.point_in_time)
    return Retention(
        RetentionType.FIXED_DATE, retention.point_in_time - dt.timedelta(days=1)  # type: ignore
    )


def mutate(
    policy: LayeredPrivacyPolicy, mutation: Mutation, edge: UnderlyingPurposeEdge
) -> LayeredPrivacyPolicy:
    """
    Apply a mutation to a composition edge of a policy generated by
    :func:`random_policy`

    Where the child cannot be weakened, e.g. because the parent's retention is
    already indefinite, the parent is strengthened instead.

    Returns
    -------
    :class:`purposegraph.lpl.LayeredPrivacyPolicy`
        Mutated policy in which ``edge`` breaks ``mutation.rule``
    """
    parent = policy.purpose(edge.parent)
    child = policy.purpose(edge.child)
    replace = dataclasses.replace

    if mutation == Mutation.ADD_CHILD_DATUM:
        return replace_purposes(policy, replace(child, data=child.data | {MUTANT_DATUM}))

    if mutation == Mutation.REMOVE_PARENT_RECIPIENT:
        # every generated purpose shares the controller of record
        return replace_purposes(
            policy,
            replace(parent, recipients=parent.recipients - {CONTROLLER_OF_RECORD}),
        )

    if mutation == Mutation.RAISE_CHILD_RETENTION:
        if parent.retention.rtype != RetentionType.INDEFINITE:
            return replace_purposes(policy, replace(child, retention=Retention()))
        return replace_purposes(
            policy, replace(parent, retention=_strictly_below(child.retention))
        )

    if mutation == Mutation.WEAKEN_CHILD_PRIVACY_MODEL:
        if parent.privacy_model is not None:
            return replace_purposes(policy, replace(child, privacy_model=None))
        k = child.privacy_model.attributes["k"] + 1 if child.privacy_model else 2
        return replace_purposes(
            policy, replace(parent, privacy_model=PrivacyModel(K_ANONYMITY, {"k": k}))
        )

    if mutation == Mutation.FLIP_CHILD_REQUIRED:
        return replace_purposes(policy, replace(child, required=not child.required))

    if mutation == Mutation.FLIP_CHILD_OPT_OUT:
        return replace_purposes(policy, replace(child, opt_out=not child.opt_out))

    if mutation == Mutation.ADD_BACK_EDGE:
        return dataclasses.replace(
            policy,
            composition=policy.composition
            | {UnderlyingPurposeEdge(edge.child, edge.parent)},
        )

    raise NotImplementedError(mutation)  # pragma: no cover


def _net_chain(
    rng: np.random.Generator, label: str, n_transitions: int
) -> ServiceNet:
    places = ["i"] + [f"p{k}" for k in range(1, n_transitions)] + ["o"]
    if n_transitions == 0:
        places = ["i", "o"]
    transitions = []
    arcs = []
    for k in range(n_transitions):
        tid = f"t{k + 1}"
        transitions.append(
            Transition(tid, f"{label} step {k + 1}", frozenset(_subset(rng, DATA_VOCABULARY, 0.2)))
        )
        arcs.append((places[k], tid))
        arcs.append((tid, places[k + 1]))
    return ServiceNet(
        places=frozenset(places),
        transitions=frozenset(transitions),
        arcs=frozenset(arcs),
        input="i",
        output="o",
    )


def random_service_tree(
    seed: SeedLike = None, max_depth: int = 4, max_components: int = 3
) -> WebService:
    """
    Generate a web service tree

    Leaves carry a chain-shaped net with zero to three transitions, composites carry an
    own net with probability 0.3. Service names are unique.

    Parameters
    ----------
    seed
        Seed or random generator

    max_depth
        Largest depth of the tree, the root has depth 1

    max_components
        Largest number of direct components of a composite
    """
    rng = _rng(seed)
    counter = iter(range(10**9))

    def build(depth: int) -> WebService:
        name = f"s{next(counter)}"
        if depth >= max_depth or _coin(rng, 0.35):
            return WebService(name, net=_net_chain(rng, name, _randint(rng, 0, 3)))
        components = tuple(build(depth + 1) for _ in range(_randint(rng, 1, max_components)))
        net = _net_chain(rng, name, _randint(rng, 1, 2)) if _coin(rng, 0.3) else None
        return WebService(name, components=components, net=net)

    return build(1)


def _annotation(name: str, arg: Optional[str] = None) -> Annotation:
    return Annotation(name, arg)


def _call(receiver: str, method: str, *args: str) -> Call:
    return Call(receiver, method, tuple(args))


def random_corpus(
    seed: SeedLike = None,
    max_classes: int = 30,
    max_methods: int = 8,
    max_implementers: int = 3,
) -> Dict[str, str]:
    """
    Generate a random MiniSvc corpus

    The corpus has entities, interfaces, service classes and controllers. Method bodies
    call class methods, interface methods and library classes, construct entities and
    declare entity-typed locals and parameters. Calls may be recursive. Occasionally a
    call uses an undeclared receiver or a method which does not exist.

    Parameters
    ----------
    seed
        Seed or random generator

    max_classes
        Largest number of classes, interfaces not included

    max_methods
        Largest number of methods per class

    max_implementers
        Largest number of implementers per interface

    Returns
    -------
    dict of str: str
        Source text by relative path, one class or interface per file
    """
    rng = _rng(seed)
    n_entities = _randint(rng, 0, min(4, max_classes))
    budget = max_classes - n_entities
    n_controllers = _randint(rng, 0, min(5, budget))
    n_services = _randint(rng, 0, min(12, budget - n_controllers))
    n_interfaces = _randint(rng, 0, 2) if n_services else 0

    entities = [f"E{i}" for i in range(n_entities)]
    services = [f"S{i}" for i in range(n_services)]
    controllers = [f"C{i}" for i in range(n_controllers)]

    signatures = {f"I{i}": _randint(rng, 1, 2) for i in range(n_interfaces)}
    implements: Dict[str, str] = {}
    free = list(services)
    for interface in signatures:
        rng.shuffle(free)
        for cls in list(free[: _randint(rng, 0, max_implementers)]):
            implements[cls] = interface
            free.remove(cls)

    n_methods = {}
    for cls in services + controllers:
        minimum = signatures.get(implements.get(cls, ""), 1)
        n_methods[cls] = _randint(rng, minimum, max(minimum, max_methods))

    units: Dict[str, CompilationUnit] = {}
    for entity in entities:
        fields = tuple(
            FieldDecl("String", f"f{j}", (_annotation("PersonalData"),))
            for j in range(_randint(rng, 1, 3))
        ) + (FieldDecl("String", "note"),)
        methods = (MethodDecl("void", "touch"),)
        units[f"entities/{entity}.msvc"] = CompilationUnit(
            f"entities/{entity}.msvc",
            classes=(ClassDecl(entity, (_annotation("Document"),), None, fields, methods),),
        )

    for interface, n_sigs in signatures.items():
        units[f"interfaces/{interface}.msvc"] = CompilationUnit(
            f"interfaces/{interface}.msvc",
            interfaces=(
                InterfaceDecl(
                    interface, tuple(MethodSig("void", f"m{j}") for j in range(n_sigs))
                ),
            ),
        )

    value_types = entities + services + ["String"]
    for cls in services + controllers:
        fields: List[FieldDecl] = []
        receivers: List[Tuple[str, str]] = []
        for target in _subset(rng, services + list(signatures), 0.3):
            fields.append(FieldDecl(target, f"f_{target.lower()}"))
            receivers.append((f"f_{target.lower()}", target))
        for entity in _subset(rng, entities, 0.3):
            fields.append(FieldDecl(entity, f"f_{entity.lower()}"))
            receivers.append((f"f_{entity.lower()}", entity))
        if _coin(rng, 0.2):
            fields.append(FieldDecl("Logger", "log"))
            receivers.append(("log", "Logger"))

        methods = []
        is_controller = cls in controllers
        for m in range(n_methods[cls]):
            annotations: Tuple[Annotation, ...] = ()
            name = f"m{m}"
            if is_controller and _coin(rng, 0.7):
                name = f"h{m}"
                annotations = (_annotation("RequestMapping", f"/h{m}"),)
            params = tuple(
                Param(_pick(rng, value_types), f"a{k}")
                for k in range(_randint(rng, 0, 2))
            )
            body: List[Stmt] = []
            local_receivers = list(receivers) + [
                (p.name, p.type) for p in params if p.type in services
            ]
            for s in range(_randint(rng, 0, 4)):
                kind = _randint(rng, 0, 5)
                if kind == 0 and entities:
                    body.append(New(_pick(rng, entities)))
                elif kind == 1:
                    local_type = _pick(rng, value_types)
                    body.append(LocalDecl(local_type, f"v{s}"))
                    if local_type in services:
                        local_receivers.append((f"v{s}", local_type))
                elif kind == 2 and local_receivers:
                    receiver, rtype = _pick(rng, local_receivers)
                    if rtype in n_methods:
                        method = f"m{_randint(rng, 0, n_methods[rtype] - 1)}"
                        if rtype in controllers:
                            method = "m0"
                    elif rtype in signatures:
                        method = f"m{_randint(rng, 0, signatures[rtype] - 1)}"
                    elif rtype in entities:
                        method = "touch"
                    else:
                        method = "info"
                    body.append(_call(receiver, method))
                elif kind == 3 and _coin(rng, 0.1):
                    body.append(_call("ghost", "run"))
                elif kind == 4 and _coin(rng, 0.1) and services:
                    body.append(_call(f"f_{_pick(rng, services).lower()}", "missing"))
            methods.append(MethodDecl("void", name, annotations, params, tuple(body)))

        class_annotations: Tuple[Annotation, ...] = ()
        if is_controller:
            class_annotations = (_annotation("Controller", cls.lower()),)
            if _coin(rng, 0.3):
                class_annotations += (_annotation("RequestMapping", f"/{cls.lower()}"),)
        units[f"classes/{cls}.msvc"] = CompilationUnit(
            f"classes/{cls}.msvc",
            classes=(
                ClassDecl(
                    cls,
                    class_annotations,
                    implements.get(cls),
                    _unique_fields(fields),
                    tuple(methods),
                ),
            ),
        )

    return {path: format_unit(unit) for path, unit in sorted(units.items())}


def _unique_fields(fields: List[FieldDecl]) -> Tuple[FieldDecl, ...]:
    seen: Set[str] = set()
    out = []
    for field in fields:
        if field.name not in seen:
            seen.add(field.name)
            out.append(field)
    return tuple(out)


def synthetic_corpus(
    n_controllers: int = 30,
    n_endpoints: int = 245,
    n_entities: int = 19,
    n_without_data: int = 8,
    seed: SeedLike = 0,
) -> Dict[str, str]:
    """
    Generate a corpus shaped like a mid-sized web service code-base

    Entry-points are distributed over the controllers at random, every controller
    having at least one. Entry-points of controllers with personal data store an
    entity through a repository class, cycling through the entities so each is used
    if there are enough entry-points. Some also notify through an interface with two
    implementations. Controllers without personal data have empty entry-points.

    Parameters
    ----------
    n_controllers
        Number of controllers

    n_endpoints
        Number of entry-points, at least ``n_controllers``

    n_entities
        Number of entity types

    n_without_data
        Number of controllers whose entry-points touch no personal data

    seed
        Seed or random generator

    Returns
    -------
    dict of str: str
        Source text by relative path

    Raises
    ------
    ValueError
        The requested shape is impossible
    """
    if n_controllers < 0 or n_endpoints < n_controllers:
        raise ValueError("Every controller needs at least one entry-point")
    if n_controllers and not n_endpoints:
        raise ValueError("Every controller needs at least one entry-point")
    if not 0 <= n_without_data <= n_controllers:
        raise ValueError("n_without_data must be between 0 and n_controllers")
    if n_entities <= 0 and n_without_data < n_controllers:
        raise ValueError("Controllers with personal data need at least one entity")

    rng = _rng(seed)
    counts = [1] * n_controllers
    if n_controllers:
        extra = rng.multinomial(n_endpoints - n_controllers, [1 / n_controllers] * n_controllers)
        counts = [1 + int(e) for e in extra]
    without_data = set(int(i) for i in rng.permutation(n_controllers)[:n_without_data])

    entities = [f"Entity{i:02d}" for i in range(n_entities)]
    units: Dict[str, CompilationUnit] = {}
    for entity in entities:
        fields = (
            FieldDecl("String", "id"),
            FieldDecl("String", "email", (_annotation("PersonalData"),)),
            FieldDecl("String", "name", (_annotation("PersonalData"),)),
        )
        units[f"entities/{entity}.msvc"] = CompilationUnit(
            f"entities/{entity}.msvc",
            classes=(ClassDecl(entity, (_annotation("Document"),), None, fields),),
        )
        repo = f"{entity}Repo"
        units[f"repositories/{repo}.msvc"] = CompilationUnit(
            f"repositories/{repo}.msvc",
            classes=(
                ClassDecl(
                    repo,
                    methods=(MethodDecl("void", "save", params=(Param(entity, "e"),)),),
                ),
            ),
        )

    if entities:
        notifiers = (
            ClassDecl(
                "MailNotifier",
                implements="Notifier",
                methods=(MethodDecl("void", "send", body=(New(entities[0]),)),),
            ),
            ClassDecl(
                "PushNotifier",
                implements="Notifier",
                methods=(MethodDecl("void", "send", body=(New(entities[-1]),)),),
            ),
        )
        units["notifiers.msvc"] = CompilationUnit(
            "notifiers.msvc",
            classes=notifiers,
            interfaces=(InterfaceDecl("Notifier", (MethodSig("void", "send"),)),),
        )

    cursor = 0
    for i, count in enumerate(counts):
        cls = f"Controller{i:02d}"
        fields: List[FieldDecl] = []
        methods = []
        for j in range(count):
            body: List[Stmt] = []
            params: Tuple[Param, ...] = ()
            if i not in without_data:
                entity = entities[cursor % len(entities)]
                cursor += 1
                repo_field = f"{entity[0].lower()}{entity[1:]}Repo"
                fields.append(FieldDecl(f"{entity}Repo", repo_field))
                params = (Param(entity, "item"),)
                body.append(_call(repo_field, "save", "item"))
                if _coin(rng, 0.2):
                    fields.append(FieldDecl("Notifier", "notifier"))
                    body.append(_call("notifier", "send"))
            methods.append(
                MethodDecl(
                    "void",
                    f"op{j}",
                    (_annotation("RequestMapping", f"/op{j}"),),
                    params,
                    tuple(body),
                )
            )
        units[f"controllers/{cls}.msvc"] = CompilationUnit(
            f"controllers/{cls}.msvc",
            classes=(
                ClassDecl(
                    cls,
                    (
                        _annotation("Controller", f"ctrl{i:02d}"),
                        _annotation("RequestMapping", f"/ctrl{i:02d}"),
                    ),
                    None,
                    _unique_fields(fields),
                    tuple(methods),
                ),
            ),
        )

    return {path: format_unit(unit) for path, unit in sorted(units.items())}


def write_corpus(files: Dict[str, str], out_dir: FilePath) -> List[Path]:
    """
    Write generated source files below ``out_dir``

    Returns
    -------
    list of :class:`pathlib.Path`
        Written files, in path order
    """
    root = Path(out_dir)
    written = []
    for relative, text in sorted(files.items()):
        path = root / relative
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        written.append(path)
    return written


def assert_policies_equal(left: LayeredPrivacyPolicy, right: LayeredPrivacyPolicy) -> None:
    """
    Check that two policies are equal

    Raises
    ------
    AssertionError
        ``left`` and ``right`` differ, the message holds a diff of their canonical
        serialisations
    """
    if left == right:
        return
    diff = difflib.unified_diff(
        serialize_policy(left).splitlines(),
        serialize_policy(right).splitlines(),
        "left",
        "right",
        lineterm="",
    )
    raise AssertionError("Policies differ:\n" + "\n".join(diff))
