"""Devices, system configuration, and the state-update semantics.

A system configuration binds app instances to concrete devices, fixes the
mode set, declares finite domains for numeric attributes, and whitelists
message recipients and network endpoints.  ``sensor_state_update`` and
``actuator_state_update`` implement the event-generation rules the explorer
drives: a state change notifies subscribers; an offline device never changes
state and never broadcasts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .appdsl import (AppSpec, DslError, ParamRef, Token, TokenStream, tokenize)
from .catalog import MODES, NUMERIC, CapabilityCatalog, Capability, builtin_catalog


class ConfigError(ValueError):
    pass


class DomainError(ValueError):
    pass


@dataclass
class DeviceInstance:
    """One deployed device: declaration plus runtime state."""

    id: str
    capability: Capability
    role: str
    domains: dict[str, tuple]  # attr -> concrete finite domain
    initial_state: dict[str, object]
    offline_candidate: bool = False
    state: dict[str, object] = field(default_factory=dict)
    online: bool = True

    def __post_init__(self):
        if not self.state:
            self.state = dict(self.initial_state)

    def reset(self):
        self.state = dict(self.initial_state)
        self.online = True

    def check_value(self, attribute: str, value) -> None:
        domain = self.domains[attribute]
        if value not in domain:
            raise DomainError(
                f"value {value!r} outside domain of {self.id}.{attribute}")


@dataclass(frozen=True)
class Notification:
    app: str
    handler: str
    device: str
    attribute: str
    value: object


@dataclass(frozen=True)
class CommandRecord:
    """One command sent to an actuator during a cascade.

    Recorded even when the device is offline or the value is unchanged: the
    command was *sent*, which is what conflict/repeat/robustness checks need.
    """

    device: str
    attribute: str
    value: object
    delivered: bool
    seq: int


Subscriber = tuple[str, str, object]  # (app instance id, handler, value filter)


def _notify(subscribers: list[Subscriber], device: str, attribute: str,
            value) -> list[Notification]:
    hits = [Notification(app, handler, device, attribute, value)
            for (app, handler, want) in subscribers
            if want is None or want == value]
    hits.sort(key=lambda n: (n.app, n.handler))
    return hits


def sensor_state_update(device: DeviceInstance, attribute: str, value,
                        subscribers: list[Subscriber]) -> list[Notification]:
    """Apply a physical event to a sensor; returns subscriber notifications.

    No-op when the value equals the current state or the device is offline.
    """
    device.check_value(attribute, value)
    if not device.online:
        return []
    if device.state[attribute] == value:
        return []
    device.state[attribute] = value
    return _notify(subscribers, device.id, attribute, value)


def actuator_state_update(device: DeviceInstance, attribute: str, value,
                          subscribers: list[Subscriber],
                          log: list[CommandRecord]) -> list[Notification]:
    """Apply a command to an actuator; always logs the send first."""
    device.check_value(attribute, value)
    delivered = device.online
    log.append(CommandRecord(device.id, attribute, value, delivered, len(log)))
    if not delivered:
        return []
    if device.state[attribute] == value:
        return []
    device.state[attribute] = value
    return _notify(subscribers, device.id, attribute, value)


# ---------------------------------------------------------------------------
# System configuration

@dataclass
class AppInstance:
    id: str
    spec: AppSpec
    bindings: dict[str, tuple[str, ...]]  # slot -> device ids
    params: dict[str, object]

    def bound_devices(self) -> list[str]:
        return sorted({d for ids in self.bindings.values() for d in ids})


@dataclass
class SystemConfig:
    catalog: CapabilityCatalog
    devices: dict[str, DeviceInstance]
    apps: list[AppInstance]
    contacts: frozenset[str]
    endpoints: frozenset[str]
    modes: tuple[str, ...]
    initial_mode: str
    domains: dict[tuple[str, str], tuple]

    def narrowed(self, app_ids: list[str]) -> "SystemConfig":
        """The sub-system containing only the given app instances and the
        devices they bind.  Used for per-related-set verification."""
        apps = [a for a in self.apps if a.id in app_ids]
        keep = {d for a in apps for d in a.bound_devices()}
        devices = {i: d for i, d in self.devices.items() if i in keep}
        return SystemConfig(self.catalog, devices, apps, self.contacts,
                            self.endpoints, self.modes, self.initial_mode,
                            self.domains)

    def fresh_devices(self) -> dict[str, DeviceInstance]:
        return {
            i: DeviceInstance(d.id, d.capability, d.role, d.domains,
                              dict(d.initial_state), d.offline_candidate)
            for i, d in self.devices.items()
        }


def _effective_domain(catalog: CapabilityCatalog, cap: Capability, attr: str,
                      declared: dict[tuple[str, str], tuple],
                      modes: tuple[str, ...]) -> tuple:
    domain = cap.attributes[attr]
    if domain == MODES:
        return modes
    if domain == NUMERIC:
        key = (cap.name, attr)
        if key not in declared:
            raise ConfigError(
                f"numeric attribute {cap.name}.{attr} needs a 'domain' line")
        return declared[key]
    return domain


class _ConfigParser:
    def __init__(self, ts: TokenStream, library: dict[str, AppSpec],
                 catalog: CapabilityCatalog):
        self.ts = ts
        self.library = library
        self.catalog = catalog
        self.device_decls: list[tuple] = []
        self.app_decls: list[tuple] = []
        self.contacts: set[str] = set()
        self.endpoints: set[str] = set()
        self.modes: tuple[str, ...] = ("Home",)
        self.initial_mode = "Home"
        self.domains: dict[tuple[str, str], tuple] = {}

    def parse(self) -> SystemConfig:
        ts = self.ts
        while not ts.at("EOF"):
            if ts.at_word("device"):
                self._device()
            elif ts.at_word("domain"):
                self._domain()
            elif ts.at_word("modes"):
                self._modes()
            elif ts.at_word("app"):
                self._app()
            elif ts.at_word("contact"):
                ts.advance()
                self.contacts.add(self._name_or_string())
            elif ts.at_word("allow"):
                ts.advance()
                self.endpoints.add(self._name_or_string())
            else:
                ts.error(f"unexpected {ts.current.text!r} in configuration")
        return self._build()

    def _name_or_string(self) -> str:
        if self.ts.at("STRING"):
            return self.ts.advance().text
        return self.ts.expect("IDENT").text

    def _value(self):
        if self.ts.at("NUM"):
            return int(self.ts.advance().text)
        return self._name_or_string()

    def _device(self):
        ts = self.ts
        ts.advance()
        id_tok = ts.expect("IDENT")
        cap_tok = ts.expect("IDENT")
        ts.expect("IDENT", "role")
        ts.expect("SYM", "=")
        role = ts.expect("IDENT").text
        offline_candidate = False
        inits: dict[str, object] = {}
        while ts.at("IDENT") and not ts.at_word("device") and not self._at_keyword():
            word = ts.advance()
            if word.text == "offline-candidate":
                offline_candidate = True
                continue
            ts.expect("SYM", "=")
            inits[word.text] = self._value()
        self.device_decls.append((id_tok, cap_tok, role, offline_candidate, inits))

    def _at_keyword(self) -> bool:
        return any(self.ts.at_word(w)
                   for w in ("device", "domain", "modes", "app", "contact", "allow"))

    def _domain(self):
        ts = self.ts
        ts.advance()
        cap = ts.expect("IDENT").text
        ts.expect("SYM", ".")
        attr = ts.expect("IDENT").text
        ts.expect("SYM", "=")
        ts.expect("SYM", "{")
        values = [int(ts.expect("NUM").text)]
        while ts.at("SYM", ","):
            ts.advance()
            values.append(int(ts.expect("NUM").text))
        ts.expect("SYM", "}")
        self.domains[(cap, attr)] = tuple(values)

    def _modes(self):
        ts = self.ts
        ts.advance()
        ts.expect("SYM", "{")
        names = [ts.expect("IDENT").text]
        while ts.at("SYM", ","):
            ts.advance()
            names.append(ts.expect("IDENT").text)
        ts.expect("SYM", "}")
        ts.expect("IDENT", "initial")
        ts.expect("SYM", "=")
        initial = ts.expect("IDENT").text
        if initial not in names:
            ts.error(f"initial mode {initial!r} not among modes")
        self.modes = tuple(names)
        self.initial_mode = initial

    def _app(self):
        ts = self.ts
        ts.advance()
        iid = ts.expect("IDENT")
        ts.expect("IDENT", "uses")
        name = ts.expect("IDENT")
        ts.expect("SYM", "{")
        bindings: dict[str, tuple[str, ...]] = {}
        params: dict[str, object] = {}
        while not ts.at("SYM", "}"):
            if ts.at_word("bind"):
                ts.advance()
                slot = ts.expect("IDENT").text
                ts.expect("SYM", "=")
                ids = [ts.expect("IDENT").text]
                while ts.at("SYM", ","):
                    ts.advance()
                    ids.append(ts.expect("IDENT").text)
                ts.expect("SYM", ";")
                bindings[slot] = tuple(ids)
            elif ts.at_word("param"):
                ts.advance()
                pname = ts.expect("IDENT").text
                ts.expect("SYM", "=")
                params[pname] = self._value()
                ts.expect("SYM", ";")
            else:
                ts.error("expected 'bind' or 'param'")
        ts.advance()
        self.app_decls.append((iid, name, bindings, params))

    def _build(self) -> SystemConfig:
        devices: dict[str, DeviceInstance] = {}
        for id_tok, cap_tok, role, candidate, inits in self.device_decls:
            if id_tok.text in devices:
                raise DslError(f"duplicate device id {id_tok.text!r}",
                               id_tok.line, id_tok.col)
            if cap_tok.text not in self.catalog.capabilities:
                raise DslError(f"unknown capability {cap_tok.text!r}",
                               cap_tok.line, cap_tok.col)
            cap = self.catalog.get(cap_tok.text)
            if cap.name in ("locationMode", "clock"):
                raise DslError(f"{cap.name} is system-owned, not a device",
                               cap_tok.line, cap_tok.col)
            domains = {attr: _effective_domain(self.catalog, cap, attr,
                                               self.domains, self.modes)
                       for attr in cap.attributes}
            initial = {}
            for attr, domain in domains.items():
                initial[attr] = domain[0]
            for attr, value in inits.items():
                if attr not in domains:
                    raise DslError(f"{cap.name} has no attribute {attr!r}",
                                   id_tok.line, id_tok.col)
                if value not in domains[attr]:
                    raise DslError(
                        f"initial {id_tok.text}.{attr}={value!r} outside domain",
                        id_tok.line, id_tok.col)
                initial[attr] = value
            devices[id_tok.text] = DeviceInstance(
                id_tok.text, cap, role, domains, initial, candidate)

        apps: list[AppInstance] = []
        seen_apps: set[str] = set()
        for iid, name, bindings, params in self.app_decls:
            if iid.text in seen_apps:
                raise DslError(f"duplicate app instance {iid.text!r}",
                               iid.line, iid.col)
            seen_apps.add(iid.text)
            if name.text not in self.library:
                raise DslError(f"unknown app {name.text!r}", name.line, name.col)
            spec = self.library[name.text]
            apps.append(self._bind_app(iid, spec, bindings, params, devices))

        return SystemConfig(self.catalog, devices, apps,
                            frozenset(self.contacts), frozenset(self.endpoints),
                            self.modes, self.initial_mode, dict(self.domains))

    def _bind_app(self, iid: Token, spec: AppSpec,
                  bindings: dict[str, tuple[str, ...]], params: dict[str, object],
                  devices: dict[str, DeviceInstance]) -> AppInstance:
        for slot in spec.slots:
            ids = bindings.get(slot.name)
            if not ids:
                raise ConfigError(f"app {iid.text!r}: slot {slot.name!r} unbound")
            if not slot.many and len(ids) != 1:
                raise ConfigError(
                    f"app {iid.text!r}: slot {slot.name!r} takes exactly one device")
            for did in ids:
                dev = devices.get(did)
                if dev is None:
                    raise ConfigError(f"app {iid.text!r}: unknown device {did!r}")
                if dev.capability.name != slot.capability:
                    raise ConfigError(
                        f"app {iid.text!r}: slot {slot.name!r} needs "
                        f"{slot.capability}, device {did!r} is {dev.capability.name}")
        for slot_name in bindings:
            if not any(s.name == slot_name for s in spec.slots):
                raise ConfigError(f"app {iid.text!r}: unknown slot {slot_name!r}")
        for pspec in spec.params:
            if pspec.name not in params:
                raise ConfigError(f"app {iid.text!r}: param {pspec.name!r} unset")
            if params[pspec.name] not in pspec.domain:
                raise ConfigError(
                    f"app {iid.text!r}: param {pspec.name}={params[pspec.name]!r} "
                    f"outside declared domain")
        for pname in params:
            if not any(p.name == pname for p in spec.params):
                raise ConfigError(f"app {iid.text!r}: unknown param {pname!r}")
        return AppInstance(iid.text, spec, dict(bindings), dict(params))


def load_config(source: str, library: dict[str, AppSpec],
                catalog: CapabilityCatalog | None = None) -> SystemConfig:
    """Parse and fully validate a system configuration."""
    catalog = catalog or builtin_catalog()
    return _ConfigParser(TokenStream(tokenize(source)), library, catalog).parse()


def resolve_param(value, instance: AppInstance):
    if isinstance(value, ParamRef):
        return instance.params[value.name]
    return value
