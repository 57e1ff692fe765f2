"""Device capability catalog.

Capabilities describe what a class of devices can sense or actuate: each one
owns a set of attributes with finite value domains.  The shipped catalog is a
data file so new device types are configuration, not code.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources

NUMERIC = "numeric"
MODES = "modes"

#: Attribute name used for location-mode events.
MODE_ATTR = "mode"
#: Attribute name used for clock/schedule pseudo-events.
TIME_ATTR = "time"


class CatalogError(ValueError):
    """Malformed catalog data or unknown capability/attribute."""


@dataclass(frozen=True)
class Capability:
    """A device class: its name, sensor/actuator kind, and attributes.

    ``attributes`` maps attribute name to a tuple of values for finite
    enumerations, or to the sentinel strings ``"numeric"`` / ``"modes"`` for
    domains declared elsewhere (system configuration).  All attributes are
    readable; only actuator (and dual) capabilities accept commands.
    """

    name: str
    kind: str  # sensor | actuator | dual
    attributes: dict[str, tuple[str, ...] | str] = field(default_factory=dict)
    momentary: frozenset[str] = frozenset()

    @property
    def is_sensor(self) -> bool:
        return self.kind in ("sensor", "dual")

    @property
    def is_actuator(self) -> bool:
        return self.kind in ("actuator", "dual")


_CAP_RE = re.compile(r"^capability\s+(\w+)\s+(sensor|actuator|dual)\s+(.*)$")


def _parse_domain(text: str) -> tuple[str, ...] | str:
    if text == NUMERIC or text == MODES:
        return text
    if text.startswith("{") and text.endswith("}"):
        values = tuple(v.strip() for v in text[1:-1].split(",") if v.strip())
        if not values:
            raise CatalogError("empty value domain")
        return values
    raise CatalogError(f"bad domain {text!r}")


class CapabilityCatalog:
    """All known capabilities plus an attribute-name index.

    Attribute names are unique across the catalog, which lets event patterns
    be keyed by attribute alone.
    """

    def __init__(self, capabilities: list[Capability]):
        self.capabilities: dict[str, Capability] = {}
        self.attribute_owner: dict[str, Capability] = {}
        for cap in capabilities:
            if cap.name in self.capabilities:
                raise CatalogError(f"duplicate capability {cap.name}")
            self.capabilities[cap.name] = cap
            for attr, domain in cap.attributes.items():
                if attr in self.attribute_owner:
                    raise CatalogError(
                        f"attribute {attr} declared by both "
                        f"{self.attribute_owner[attr].name} and {cap.name}"
                    )
                if isinstance(domain, tuple) and not domain:
                    raise CatalogError(f"{cap.name}.{attr} has empty domain")
                self.attribute_owner[attr] = cap

    def get(self, name: str) -> Capability:
        try:
            return self.capabilities[name]
        except KeyError:
            raise CatalogError(f"unknown capability {name!r}") from None

    def owner_of(self, attr: str) -> Capability:
        try:
            return self.attribute_owner[attr]
        except KeyError:
            raise CatalogError(f"unknown attribute {attr!r}") from None

    def is_command_attr(self, attr: str) -> bool:
        """True if commands may target this attribute (actuator or mode)."""
        return self.owner_of(attr).is_actuator


def parse_catalog(text: str) -> CapabilityCatalog:
    caps = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _CAP_RE.match(line)
        if not m:
            raise CatalogError(f"catalog line {lineno}: cannot parse {line!r}")
        name, kind, rest = m.groups()
        attributes: dict[str, tuple[str, ...] | str] = {}
        momentary = set()
        for tok in rest.split():
            key, _, val = tok.partition("=")
            if not val:
                raise CatalogError(f"catalog line {lineno}: bad field {tok!r}")
            if key == "momentary":
                momentary.add(val)
            else:
                attributes[key] = _parse_domain(val)
        for attr in momentary:
            if attr not in attributes:
                raise CatalogError(f"catalog line {lineno}: momentary {attr!r} undeclared")
        caps.append(Capability(name, kind, attributes, frozenset(momentary)))
    return CapabilityCatalog(caps)


_builtin: CapabilityCatalog | None = None


def builtin_catalog() -> CapabilityCatalog:
    """The catalog shipped with the package (17 capabilities)."""
    global _builtin
    if _builtin is None:
        text = resources.files("homesafe.data").joinpath("capabilities.cfg").read_text()
        _builtin = parse_catalog(text)
    return _builtin
