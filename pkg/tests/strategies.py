"""Hypothesis strategies for entities and q expressions."""

from __future__ import annotations

from hypothesis import strategies as st

from netinv.context.model import Attribute, Entity

ENTITY_TYPES = ["Module", "Platform", "Datastore"]
ATTRIBUTE_NAMES = ["name", "revision", "conformanceType", "treeType", "color", "size"]
RELATIONSHIP_NAMES = ["belongsTo", "ofPlatform", "hasSchema"]
SUFFIXES = ["a", "b", "c", "one:two", "x y", "m%1"]
WORDS = ["ietf-interfaces", "openconfig", "red", "blue", "import", "implement", "x"]

urns = st.builds(
    lambda t, s: f"urn:ngsi-ld:{t}:{s}",
    st.sampled_from(ENTITY_TYPES),
    st.sampled_from(["a", "b", "c", "d", "e"]),
)

scalar_values = st.one_of(
    st.sampled_from(WORDS),
    st.integers(min_value=-5, max_value=100),
    st.booleans(),
    st.lists(st.sampled_from(WORDS), min_size=1, max_size=3),
)

dataset_ids = st.sampled_from(
    [f"urn:ngsi-ld:Datastore:{c}" for c in "abc"] + [f"urn:ngsi-ld:Module:{c}:unknown" for c in "xy"]
)


def _instances(draw, depth: int) -> list[Attribute]:
    kind = draw(st.sampled_from(["Property", "Relationship"]))
    count = draw(st.integers(min_value=1, max_value=3))
    ids = draw(
        st.lists(dataset_ids, min_size=count, max_size=count, unique=True).map(list)
    )
    if count >= 1 and draw(st.booleans()):
        ids[0] = None  # at most one default instance
    out = []
    for dataset_id in ids:
        subs = {}
        if depth > 0 and draw(st.integers(0, 3)) == 0:
            sub_name = draw(st.sampled_from(ATTRIBUTE_NAMES))
            subs[sub_name] = _instances(draw, depth - 1)
        if kind == "Property":
            out.append(
                Attribute(
                    kind="Property",
                    value=draw(scalar_values),
                    dataset_id=dataset_id,
                    sub_attributes=subs,
                )
            )
        else:
            out.append(
                Attribute(
                    kind="Relationship",
                    object=draw(urns),
                    dataset_id=dataset_id,
                    sub_attributes=subs,
                )
            )
    return out


@st.composite
def entities(draw, entity_type: str | None = None, suffix: str | None = None) -> Entity:
    etype = entity_type or draw(st.sampled_from(ENTITY_TYPES))
    seg = suffix or draw(st.sampled_from(SUFFIXES))
    from netinv.ids import make_urn

    attrs = {}
    for name in draw(
        st.lists(
            st.sampled_from(ATTRIBUTE_NAMES + RELATIONSHIP_NAMES), min_size=0, max_size=4, unique=True
        )
    ):
        attrs[name] = _instances(draw, depth=2)
    entity = Entity(id=make_urn(etype, seg), type=etype, attributes=attrs)
    entity.validate()
    return entity


@st.composite
def q_expressions(draw) -> str:
    terms = []
    for _ in range(draw(st.integers(min_value=1, max_value=2))):
        path_len = draw(st.integers(min_value=1, max_value=2))
        path = ".".join(
            draw(st.sampled_from(ATTRIBUTE_NAMES + RELATIONSHIP_NAMES)) for _ in range(path_len)
        )
        op = draw(st.sampled_from(["==", "!=", "~="]))
        if op == "~=":
            literal = '"' + draw(st.sampled_from(["inter", "^open", "red|blue", "x$"])) + '"'
        else:
            literal = draw(
                st.one_of(
                    st.sampled_from(WORDS + [u for u in ["urn:ngsi-ld:Module:a:unknown"]]).map(
                        lambda w: f'"{w}"'
                    ),
                    st.integers(min_value=-5, max_value=100).map(str),
                    st.sampled_from(["true", "false"]),
                )
            )
        terms.append(f"{path}{op}{literal}")
    return ";".join(terms)
