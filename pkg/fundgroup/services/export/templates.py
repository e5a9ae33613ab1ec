import json
from typing import Any, Dict

from jinja2 import DictLoader, Environment, StrictUndefined, TemplateNotFound

from fundgroup.domain.errors import InvariantViolation

SCHEMA_VERSION = 1

_MACROS = """
{% macro group(g, indent="  ") %}
{{ indent }}n = {{ g.n }}
{{ indent }}diagonal generators:{% if not g.diag_gens %} none{% endif %}

{% for gen in g.diag_gens %}
{{ indent }}  diag({{ gen | join(", ") }})
{% endfor %}
{{ indent }}coset representatives:
{% for rep in g.cosets %}
{{ indent }}  {{ "%-12s" | format(rep.perm) }} diag={{ rep.diag | join(",") }}
{% endfor %}
{% endmacro %}
{% macro mgroup(m) -%}
{% if m.generators %}<{{ m.generators | join(", ") }}>{% else %}{1}{% endif %}{% if not m.complete %} (possibly incomplete){% endif %}
{%- endmacro %}
"""

_TEMPLATES: Dict[str, str] = {
    "envelope": """{% import "macros" as m %}
algebra        {{ model.name or "-" }} ({{ model.kind }})
traces         {{ module.traces | join(", ") }}  [{{ module.field }}, rank {{ module.rank }}]
status         {{ status }}{% if status == "exact" %} ({{ label }}){% endif %}

bounds         units={{ bounds.units }} primes={{ bounds.primes }} depth={{ bounds.depth }} max_n={{ bounds.max_n }}
{% if exact %}
exact group:
{{ m.group(exact) }}
{%- else %}
verified lower group:
{{ m.group(lower) }}
upper bound:
{{ m.group(upper) }}
{%- endif %}
projection upper bound:
{{ m.group(projection_upper) }}
det group      {{ m.mgroup(det_group) }}
{% if closed_form_match is not none %}
closed form    {{ "matches" if closed_form_match else "DIFFERS" }}
{% endif %}
block support
{% for row in block_support %}
  {{ row | join(" ") }}
{% endfor %}
coupling       {% for cls in coupling_classes %}{{ "{" }}{{ cls | join(",") }}{{ "}" }}{% if not loop.last %} {% endif %}{% endfor %}

transports
{% for t in transports if t.source != t.target %}
  {{ "%d -> %d" | format(t.source, t.target) }}  {{ "%-22s" | format(t.status) }} {{ t.representative or t.reason }}
{% endfor %}
{% if notes %}
notes
{% for note in notes %}
  - {{ note }}
{% endfor %}
{% endif %}
""",
    "decompose": "{{ text }}\n",
    "stabilizer": """{% import "macros" as m %}
stabilizer     {{ m.mgroup(stabilizer) }}
""",
    "transporter": """{% import "macros" as m %}
status         {{ status }}
{% if representative %}
lambda         {{ representative }}
{% endif %}
{% if stabilizer %}
stabilizer     {{ m.mgroup(stabilizer) }}
{% endif %}
{% if reason %}
reason         {{ reason }}
{% endif %}
""",
    "group": """{% import "macros" as m %}
{{ m.group(group, "") }}""",
    "detgroup": """{% import "macros" as m %}
det group      {{ m.mgroup(det_group) }}
""",
    "weightediso": """status         {{ status }}
{% if matrix %}
P              {{ matrix.text }}
{% endif %}
{% if reason %}
reason         {{ reason }}
{% endif %}
""",
    "bratteli_dims": """diagram        {{ diagram }}
{% for row in stages %}
{{ "%-6s" | format("k=" ~ row.stage) }} {{ row.dims | join(" ") }}
{% endfor %}
""",
    "bratteli_simple": """diagram        {{ diagram }}
window         {{ window }}
stages         {{ stages }}
simple         {{ "yes" if simple else "no" }}
""",
    "bratteli_traces": """diagram        {{ diagram }}
stage          {{ stage }}  horizon {{ horizon }}  ({{ source }})
width          {{ width }}
{% for t in traces %}
trace {{ t.trace }}
{% for b in t.blocks %}
  block {{ b.block }}  [{{ b.lo }}, {{ b.hi }}]  width {{ b.width }}{% if b.closed_form %}  closed form {{ b.closed_form }}{% endif %}

{% endfor %}
{% endfor %}
""",
    "bratteli_check": """diagram        {{ diagram }}
stages         {{ stages }}
tolerance      {{ tolerance }}
compatible     {{ "yes" if compatible else "no" }}
""",
    "bratteli_samples": """diagram        {{ diagram }}
stage          {{ stage }}
{% for s in samples %}
  e{{ loop.index }}  ({{ s | join(", ") }})
{% endfor %}
{% if membership %}
member         {{ membership }}
{% endif %}
""",
    "dual": """algebra        {{ model }}
{% for row in rows %}
u{{ loop.index }} = {% for c in row %}{{ c }}*1_{{ loop.index }}{% if not loop.last %} + {% endif %}{% endfor %}

{% endfor %}
""",
    "selftest": """{% for c in checks %}
{{ "%-4s" | format("ok" if c.passed else "FAIL") }} {{ "%-44s" | format(c.name) }} {{ c.detail }}
{% endfor %}
{{ passed }}/{{ total }} checks passed
""",
}

_ENV = Environment(
    loader=DictLoader({"macros": _MACROS, **_TEMPLATES}),
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
    undefined=StrictUndefined,
    autoescape=False,
)


class TextRenderer:
    """
    Aligned plain-text tables through jinja2 templates, one per result kind.
    """

    def render(self, kind: str, payload: Dict[str, Any]) -> str:
        try:
            template = _ENV.get_template(kind)
        except TemplateNotFound:
            raise InvariantViolation(f"no text template for '{kind}'") from None
        return template.render(**payload).lstrip("\n")


class JsonRenderer:
    """
    One JSON document per invocation with sorted keys and the schema version.
    """

    def __init__(self, config_hash: str):
        self.config_hash = config_hash

    def render(self, kind: str, payload: Dict[str, Any]) -> str:
        document = {"schema_version": SCHEMA_VERSION, "kind": kind, "config_hash": self.config_hash, "result": payload}
        return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
