"""Parser and event extraction for the smart-app DSL.

Apps are declarative: they declare device slots and parameters, then register
event handlers whose bodies are guarded actions (actuator commands, raised
events, messages, unsubscribes, scheduled calls).  ``extract_io_events``
computes, per handler, the event patterns it consumes and produces; the
dependency analysis is built entirely on those patterns.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .catalog import MODE_ATTR, TIME_ATTR, CapabilityCatalog, builtin_catalog

LOCATION_SLOT = "location"  # reserved pseudo-slot for the system mode


class DslError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        super().__init__(f"line {line}:{col}: {message}" if line else message)


# ---------------------------------------------------------------------------
# Lexer (shared with the property-predicate and config parsers)

_SYMBOLS = ("==", "!=", "<=", ">=", "&&", "||",
            "{", "}", "(", ")", ":", ";", ",", ".", "<", ">", "!", "=")


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT | NUM | STRING | SYM | EOF
    text: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    i, line, col = 0, 1, 1
    n = len(source)
    while i < n:
        c = source[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        if c == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        if c == '"':
            j = i + 1
            while j < n and source[j] != '"':
                if source[j] == "\n":
                    raise DslError("unterminated string", line, col)
                j += 1
            if j >= n:
                raise DslError("unterminated string", line, col)
            tokens.append(Token("STRING", source[i + 1:j], line, col))
            col += j + 1 - i
            i = j + 1
            continue
        if c.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(Token("NUM", source[i:j], line, col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            # hyphens are legal inside names (role tags like main-door)
            while j < n and (source[j].isalnum() or source[j] in "_-+"):
                j += 1
            tokens.append(Token("IDENT", source[i:j], line, col))
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if source.startswith(sym, i):
                tokens.append(Token("SYM", sym, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise DslError(f"unexpected character {c!r}", line, col)
    tokens.append(Token("EOF", "", line, col))
    return tokens


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self._tokens = tokens
        self._pos = 0

    @property
    def current(self) -> Token:
        return self._tokens[self._pos]

    def advance(self) -> Token:
        tok = self.current
        if tok.kind != "EOF":
            self._pos += 1
        return tok

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.current
        return tok.kind == kind and (text is None or tok.text == text)

    def at_word(self, word: str) -> bool:
        return self.at("IDENT", word)

    def expect(self, kind: str, text: str | None = None) -> Token:
        tok = self.current
        if not self.at(kind, text):
            expected = text if text is not None else kind
            raise DslError(f"expected {expected!r}, found {tok.text or tok.kind!r}",
                           tok.line, tok.col)
        return self.advance()

    def error(self, message: str):
        tok = self.current
        raise DslError(message, tok.line, tok.col)


# ---------------------------------------------------------------------------
# AST

@dataclass(frozen=True, order=True)
class EventPattern:
    """One event class: an attribute plus a concrete value or wildcard."""

    attribute: str
    value: str | int | None = None  # None is the wildcard

    def render(self) -> str:
        return f"{self.attribute}/{'...' if self.value is None else self.value}"

    def __repr__(self):
        return f"EventPattern({self.render()!r})"


def patterns_overlap(p: EventPattern, q: EventPattern) -> bool:
    """Wildcard matches any concrete value and any wildcard of the attribute."""
    return p.attribute == q.attribute and (
        p.value is None or q.value is None or p.value == q.value)


def patterns_conflict(p: EventPattern, q: EventPattern) -> bool:
    """Same attribute, distinct values; a wildcard conflicts with anything."""
    return p.attribute == q.attribute and (
        p.value is None or q.value is None or p.value != q.value)


@dataclass(frozen=True)
class ParamRef:
    name: str


Value = int | str | ParamRef


@dataclass(frozen=True)
class SlotRead:
    slot: str
    attribute: str


@dataclass(frozen=True)
class ModeRead:
    pass


@dataclass(frozen=True)
class ClockRead:
    pass


@dataclass(frozen=True)
class ParamRead:
    name: str


Read = SlotRead | ModeRead | ClockRead | ParamRead


@dataclass(frozen=True)
class Cmp:
    lhs: Read
    op: str  # == != < <= > >=
    rhs: Value


@dataclass(frozen=True)
class And:
    items: tuple


@dataclass(frozen=True)
class Or:
    items: tuple


@dataclass(frozen=True)
class Not:
    item: object


Cond = Cmp | And | Or | Not


@dataclass(frozen=True)
class Command:
    slot: str  # LOCATION_SLOT targets the system mode
    attribute: str
    value: Value


@dataclass(frozen=True)
class RaiseEvent:
    attribute: str
    value: Value


@dataclass(frozen=True)
class SendMessage:
    recipient: str | ParamRef


@dataclass(frozen=True)
class NetworkSend:
    endpoint: str


@dataclass(frozen=True)
class Unsubscribe:
    handler: str


@dataclass(frozen=True)
class ScheduleCall:
    delay: int
    handler: str


Action = Command | RaiseEvent | SendMessage | NetworkSend | Unsubscribe | ScheduleCall


@dataclass(frozen=True)
class Statement:
    """One action with the conjunction of its enclosing guards (or None)."""

    guard: Cond | None
    action: Action


@dataclass(frozen=True)
class Subscription:
    slot: str  # LOCATION_SLOT subscribes to mode changes
    attribute: str
    value: str | int | None  # None subscribes to any value


@dataclass(frozen=True)
class Schedule:
    period: int  # fires whenever the clock reaches a multiple; 0 = manual only


@dataclass(frozen=True)
class AppTouch:
    pass


Trigger = Subscription | Schedule | AppTouch


@dataclass(frozen=True)
class SlotSpec:
    name: str
    capability: str
    many: bool


@dataclass(frozen=True)
class ParamSpec:
    name: str
    kind: str  # number | enum
    domain: tuple


@dataclass(frozen=True)
class HandlerSpec:
    name: str
    trigger: Trigger
    body: tuple[Statement, ...]


@dataclass(frozen=True)
class AppSpec:
    name: str
    description: str
    slots: tuple[SlotSpec, ...]
    params: tuple[ParamSpec, ...]
    handlers: tuple[HandlerSpec, ...]

    def slot(self, name: str) -> SlotSpec:
        for s in self.slots:
            if s.name == name:
                return s
        raise KeyError(name)

    def param(self, name: str) -> ParamSpec:
        for p in self.params:
            if p.name == name:
                return p
        raise KeyError(name)

    def handler(self, name: str) -> HandlerSpec:
        for h in self.handlers:
            if h.name == name:
                return h
        raise KeyError(name)


# ---------------------------------------------------------------------------
# Parser

def _handler_name(trigger: Trigger) -> str:
    if isinstance(trigger, Subscription):
        base = f"on_{trigger.slot}_{trigger.attribute}"
        if trigger.value is not None:
            base += f"_{trigger.value}"
        return base
    if isinstance(trigger, Schedule):
        return f"every_{trigger.period}"
    return "on_touch"


class _AppParser:
    def __init__(self, ts: TokenStream, catalog: CapabilityCatalog):
        self.ts = ts
        self.catalog = catalog
        self.slots: dict[str, SlotSpec] = {}
        self.params: dict[str, ParamSpec] = {}

    def parse(self) -> AppSpec:
        ts = self.ts
        ts.expect("IDENT", "app")
        name = ts.expect("IDENT").text
        ts.expect("SYM", "{")
        description = ""
        while ts.at_word("description"):
            ts.advance()
            description = ts.expect("STRING").text
        while ts.at_word("slot"):
            self._slot()
        while ts.at_word("param"):
            self._param()
        handlers: list[HandlerSpec] = []
        while ts.at_word("on"):
            handlers.append(self._handler())
        ts.expect("SYM", "}")
        ts.expect("EOF")
        seen = set()
        for h in handlers:
            if h.name in seen:
                raise DslError(f"duplicate handler {h.name!r} in app {name!r}")
            seen.add(h.name)
        self._check_handler_refs(name, handlers, seen)
        return AppSpec(name, description, tuple(self.slots.values()),
                       tuple(self.params.values()), tuple(handlers))

    def _slot(self):
        ts = self.ts
        ts.advance()
        tok = ts.expect("IDENT")
        name = tok.text
        if name in self.slots:
            raise DslError(f"duplicate slot {name!r}", tok.line, tok.col)
        if name == LOCATION_SLOT:
            raise DslError(f"slot name {name!r} is reserved", tok.line, tok.col)
        ts.expect("SYM", ":")
        cap_tok = ts.expect("IDENT")
        if cap_tok.text not in self.catalog.capabilities:
            raise DslError(f"unknown capability {cap_tok.text!r}",
                           cap_tok.line, cap_tok.col)
        mult = ts.expect("IDENT")
        if mult.text not in ("one", "many"):
            raise DslError("expected 'one' or 'many'", mult.line, mult.col)
        self.slots[name] = SlotSpec(name, cap_tok.text, mult.text == "many")

    def _param(self):
        ts = self.ts
        ts.advance()
        tok = ts.expect("IDENT")
        name = tok.text
        if name in self.params:
            raise DslError(f"duplicate param {name!r}", tok.line, tok.col)
        ts.expect("SYM", ":")
        kind = ts.expect("IDENT")
        if kind.text == "number":
            ts.expect("IDENT", "in")
            ts.expect("SYM", "{")
            values = [int(ts.expect("NUM").text)]
            while ts.at("SYM", ","):
                ts.advance()
                values.append(int(ts.expect("NUM").text))
            ts.expect("SYM", "}")
            self.params[name] = ParamSpec(name, "number", tuple(values))
        elif kind.text == "enum":
            ts.expect("SYM", "{")
            values = [ts.expect("IDENT").text]
            while ts.at("SYM", ","):
                ts.advance()
                values.append(ts.expect("IDENT").text)
            ts.expect("SYM", "}")
            self.params[name] = ParamSpec(name, "enum", tuple(values))
        else:
            raise DslError("expected 'number' or 'enum'", kind.line, kind.col)

    def _handler(self) -> HandlerSpec:
        ts = self.ts
        ts.advance()  # on
        trigger = self._trigger()
        ts.expect("SYM", "{")
        body: list[Statement] = []
        while not ts.at("SYM", "}"):
            body.extend(self._stmt(None))
        ts.advance()
        return HandlerSpec(_handler_name(trigger), trigger, tuple(body))

    def _trigger(self) -> Trigger:
        ts = self.ts
        if ts.at_word("schedule"):
            ts.advance()
            ts.expect("SYM", "(")
            period = int(ts.expect("NUM").text)
            ts.expect("SYM", ")")
            return Schedule(period)
        if ts.at_word("touch"):
            ts.advance()
            return AppTouch()
        tok = ts.expect("IDENT")
        ts.expect("SYM", ".")
        attr_tok = ts.expect("IDENT")
        value = None
        if ts.at("SYM", "=="):
            ts.advance()
            value = self._value_token()
        if tok.text == LOCATION_SLOT:
            if attr_tok.text != MODE_ATTR:
                raise DslError("only 'location.mode' may be subscribed",
                               attr_tok.line, attr_tok.col)
            if isinstance(value, ParamRef):
                raise DslError("trigger value must be a literal", tok.line, tok.col)
            return Subscription(LOCATION_SLOT, MODE_ATTR, value)
        slot = self.slots.get(tok.text)
        if slot is None:
            raise DslError(f"undeclared slot {tok.text!r} in trigger",
                           tok.line, tok.col)
        self._check_attr(slot, attr_tok)
        if isinstance(value, ParamRef):
            raise DslError("trigger value must be a literal", tok.line, tok.col)
        if value is not None:
            self._check_literal(slot, attr_tok.text, value, attr_tok)
        return Subscription(slot.name, attr_tok.text, value)

    def _check_attr(self, slot: SlotSpec, attr_tok: Token) -> None:
        cap = self.catalog.get(slot.capability)
        if attr_tok.text not in cap.attributes:
            raise DslError(
                f"capability {cap.name!r} has no attribute {attr_tok.text!r}",
                attr_tok.line, attr_tok.col)

    def _check_literal(self, slot: SlotSpec, attr: str, value, tok: Token) -> None:
        domain = self.catalog.get(slot.capability).attributes[attr]
        if isinstance(domain, tuple):
            if value not in domain:
                raise DslError(f"value {value!r} not in domain of "
                               f"{slot.capability}.{attr}", tok.line, tok.col)
        elif isinstance(value, str):
            raise DslError(f"{slot.capability}.{attr} is numeric", tok.line, tok.col)

    def _value_token(self) -> Value:
        ts = self.ts
        if ts.at("NUM"):
            return int(ts.advance().text)
        tok = ts.expect("IDENT")
        if tok.text in self.params:
            return ParamRef(tok.text)
        return tok.text

    def _stmt(self, guard: Cond | None) -> list[Statement]:
        ts = self.ts
        if ts.at_word("if"):
            ts.advance()
            ts.expect("SYM", "(")
            cond = self._cond()
            ts.expect("SYM", ")")
            combined = cond if guard is None else And((guard, cond))
            return self._stmt(combined)
        if ts.at("SYM", "{"):
            ts.advance()
            out: list[Statement] = []
            while not ts.at("SYM", "}"):
                out.extend(self._stmt(guard))
            ts.advance()
            return out
        return [Statement(guard, self._action())]

    def _action(self) -> Action:
        ts = self.ts
        tok = ts.expect("IDENT")
        word = tok.text
        if word == "raise":
            ts.expect("SYM", "(")
            attr_tok = ts.expect("IDENT")
            cap = self.catalog.owner_of(attr_tok.text)
            ts.expect("SYM", ",")
            value = self._value_token()
            ts.expect("SYM", ")")
            ts.expect("SYM", ";")
            if not isinstance(value, ParamRef):
                domain = cap.attributes[attr_tok.text]
                if isinstance(domain, tuple) and value not in domain:
                    raise DslError(f"value {value!r} not in domain of "
                                   f"{attr_tok.text}", attr_tok.line, attr_tok.col)
            return RaiseEvent(attr_tok.text, value)
        if word == "sms":
            ts.expect("SYM", "(")
            if ts.at("STRING"):
                recipient: str | ParamRef = ts.advance().text
            else:
                rt = ts.expect("IDENT")
                if rt.text in self.params:
                    recipient = ParamRef(rt.text)
                else:
                    recipient = rt.text
            ts.expect("SYM", ")")
            ts.expect("SYM", ";")
            return SendMessage(recipient)
        if word == "post":
            ts.expect("SYM", "(")
            endpoint = ts.expect("STRING").text
            ts.expect("SYM", ")")
            ts.expect("SYM", ";")
            return NetworkSend(endpoint)
        if word == "unsubscribe":
            ts.expect("SYM", "(")
            handler = ts.expect("IDENT").text
            ts.expect("SYM", ")")
            ts.expect("SYM", ";")
            return Unsubscribe(handler)
        if word == "runIn":
            ts.expect("SYM", "(")
            delay = int(ts.expect("NUM").text)
            ts.expect("SYM", ",")
            handler = ts.expect("IDENT").text
            ts.expect("SYM", ")")
            ts.expect("SYM", ";")
            return ScheduleCall(delay, handler)
        # command: slot.set(attr, value);
        ts.expect("SYM", ".")
        ts.expect("IDENT", "set")
        ts.expect("SYM", "(")
        attr_tok = ts.expect("IDENT")
        ts.expect("SYM", ",")
        value = self._value_token()
        ts.expect("SYM", ")")
        ts.expect("SYM", ";")
        if word == LOCATION_SLOT:
            if attr_tok.text != MODE_ATTR:
                raise DslError("only 'location.set(mode, ...)' is allowed",
                               attr_tok.line, attr_tok.col)
            return Command(LOCATION_SLOT, MODE_ATTR, value)
        slot = self.slots.get(word)
        if slot is None:
            raise DslError(f"undeclared slot {word!r} in command", tok.line, tok.col)
        self._check_attr(slot, attr_tok)
        if not self.catalog.get(slot.capability).is_actuator:
            raise DslError(f"capability {slot.capability!r} takes no commands",
                           attr_tok.line, attr_tok.col)
        if not isinstance(value, ParamRef):
            self._check_literal(slot, attr_tok.text, value, attr_tok)
        return Command(slot.name, attr_tok.text, value)

    def _cond(self) -> Cond:
        items = [self._cond_and()]
        while self.ts.at("SYM", "||"):
            self.ts.advance()
            items.append(self._cond_and())
        return items[0] if len(items) == 1 else Or(tuple(items))

    def _cond_and(self) -> Cond:
        items = [self._cond_unary()]
        while self.ts.at("SYM", "&&"):
            self.ts.advance()
            items.append(self._cond_unary())
        return items[0] if len(items) == 1 else And(tuple(items))

    def _cond_unary(self) -> Cond:
        ts = self.ts
        if ts.at("SYM", "!"):
            ts.advance()
            return Not(self._cond_unary())
        if ts.at("SYM", "("):
            ts.advance()
            cond = self._cond()
            ts.expect("SYM", ")")
            return cond
        return self._comparison()

    def _comparison(self) -> Cmp:
        ts = self.ts
        tok = ts.expect("IDENT")
        lhs: Read
        if tok.text == MODE_ATTR:
            lhs = ModeRead()
        elif tok.text == "clock":
            lhs = ClockRead()
        elif ts.at("SYM", "."):
            ts.advance()
            attr_tok = ts.expect("IDENT")
            if tok.text == LOCATION_SLOT and attr_tok.text == MODE_ATTR:
                lhs = ModeRead()
            else:
                slot = self.slots.get(tok.text)
                if slot is None:
                    raise DslError(f"undeclared slot {tok.text!r} in condition",
                                   tok.line, tok.col)
                self._check_attr(slot, attr_tok)
                lhs = SlotRead(slot.name, attr_tok.text)
        elif tok.text in self.params:
            lhs = ParamRead(tok.text)
        else:
            raise DslError(f"undeclared name {tok.text!r} in condition",
                           tok.line, tok.col)
        op_tok = ts.expect("SYM")
        if op_tok.text not in ("==", "!=", "<", "<=", ">", ">="):
            raise DslError(f"bad comparison operator {op_tok.text!r}",
                           op_tok.line, op_tok.col)
        rhs = self._value_token()
        if isinstance(lhs, SlotRead) and not isinstance(rhs, ParamRef):
            slot = self.slots[lhs.slot]
            self._check_literal(slot, lhs.attribute, rhs, op_tok)
        return Cmp(lhs, op_tok.text, rhs)

    def _check_handler_refs(self, app: str, handlers: list[HandlerSpec],
                            names: set[str]) -> None:
        for h in handlers:
            for stmt in h.body:
                act = stmt.action
                if isinstance(act, (Unsubscribe, ScheduleCall)):
                    if act.handler not in names:
                        raise DslError(
                            f"handler {h.name!r} of app {app!r} references "
                            f"unknown handler {act.handler!r}")


def parse_app(source: str, catalog: CapabilityCatalog | None = None) -> AppSpec:
    """Parse DSL text into a fully resolved, validated AppSpec."""
    catalog = catalog or builtin_catalog()
    return _AppParser(TokenStream(tokenize(source)), catalog).parse()


# ---------------------------------------------------------------------------
# Pretty-printer (canonical form; parse(render(app)) == app)

def _render_value(value: Value) -> str:
    if isinstance(value, ParamRef):
        return value.name
    return str(value)


def _render_read(read: Read) -> str:
    if isinstance(read, SlotRead):
        return f"{read.slot}.{read.attribute}"
    if isinstance(read, ModeRead):
        return MODE_ATTR
    if isinstance(read, ClockRead):
        return "clock"
    return read.name


def render_cond(cond: Cond) -> str:
    if isinstance(cond, Cmp):
        return f"{_render_read(cond.lhs)} {cond.op} {_render_value(cond.rhs)}"
    if isinstance(cond, And):
        return "(" + " && ".join(render_cond(c) for c in cond.items) + ")"
    if isinstance(cond, Or):
        return "(" + " || ".join(render_cond(c) for c in cond.items) + ")"
    return "!" + render_cond(cond.item)


def _render_action(action: Action) -> str:
    if isinstance(action, Command):
        return f"{action.slot}.set({action.attribute}, {_render_value(action.value)});"
    if isinstance(action, RaiseEvent):
        return f"raise({action.attribute}, {_render_value(action.value)});"
    if isinstance(action, SendMessage):
        r = action.recipient
        return f"sms({r.name if isinstance(r, ParamRef) else quoted(r)});"
    if isinstance(action, NetworkSend):
        return f"post({quoted(action.endpoint)});"
    if isinstance(action, Unsubscribe):
        return f"unsubscribe({action.handler});"
    return f"runIn({action.delay}, {action.handler});"


def quoted(text: str) -> str:
    return f'"{text}"'


def _render_trigger(trigger: Trigger) -> str:
    if isinstance(trigger, Subscription):
        base = f"{trigger.slot}.{trigger.attribute}"
        if trigger.value is not None:
            base += f" == {trigger.value}"
        return base
    if isinstance(trigger, Schedule):
        return f"schedule({trigger.period})"
    return "touch"


def render(app: AppSpec) -> str:
    """Emit the canonical text form of an app."""
    lines = [f"app {app.name} {{"]
    if app.description:
        lines.append(f'  description {quoted(app.description)}')
    for s in app.slots:
        lines.append(f"  slot {s.name}: {s.capability} {'many' if s.many else 'one'}")
    for p in app.params:
        if p.kind == "number":
            dom = ", ".join(str(v) for v in p.domain)
            lines.append(f"  param {p.name}: number in {{{dom}}}")
        else:
            lines.append(f"  param {p.name}: enum {{{', '.join(p.domain)}}}")
    for h in app.handlers:
        lines.append(f"  on {_render_trigger(h.trigger)} {{")
        for stmt in h.body:
            if stmt.guard is not None:
                lines.append(f"    if ({render_cond(stmt.guard)}) "
                             f"{_render_action(stmt.action)}")
            else:
                lines.append(f"    {_render_action(stmt.action)}")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Input/output event extraction

def _cond_reads(cond: Cond, app: AppSpec, acc: set[EventPattern]) -> None:
    if isinstance(cond, Cmp):
        lhs = cond.lhs
        if isinstance(lhs, SlotRead):
            acc.add(EventPattern(lhs.attribute, None))
        elif isinstance(lhs, ModeRead):
            acc.add(EventPattern(MODE_ATTR, None))
        elif isinstance(lhs, ClockRead):
            acc.add(EventPattern(TIME_ATTR, None))
    elif isinstance(cond, (And, Or)):
        for item in cond.items:
            _cond_reads(item, app, acc)
    elif isinstance(cond, Not):
        _cond_reads(cond.item, app, acc)


def extract_io_events(app: AppSpec) -> dict[str, tuple[frozenset[EventPattern],
                                                       frozenset[EventPattern]]]:
    """Per-handler input and output event patterns.

    Inputs are the subscription pattern, every attribute read in a guard
    (wildcard, since any value may be read), and schedule/touch pseudo-events.
    Outputs cover every command and raised event; values that depend on a
    parameter become wildcards so the dependency analysis never misses an
    edge.  Deterministic and order-independent by construction (sets).
    """
    runin_targets = {stmt.action.handler
                     for h in app.handlers for stmt in h.body
                     if isinstance(stmt.action, ScheduleCall)}
    result = {}
    for h in app.handlers:
        inputs: set[EventPattern] = set()
        outputs: set[EventPattern] = set()
        trig = h.trigger
        if isinstance(trig, Subscription):
            inputs.add(EventPattern(trig.attribute, trig.value))
        elif isinstance(trig, Schedule):
            inputs.add(EventPattern(TIME_ATTR, None))
        else:
            inputs.add(EventPattern("app", "touch"))
        if h.name in runin_targets:
            inputs.add(EventPattern(TIME_ATTR, None))
        for stmt in h.body:
            if stmt.guard is not None:
                _cond_reads(stmt.guard, app, inputs)
            act = stmt.action
            if isinstance(act, Command):
                value = None if isinstance(act.value, ParamRef) else act.value
                outputs.add(EventPattern(act.attribute, value))
            elif isinstance(act, RaiseEvent):
                value = None if isinstance(act.value, ParamRef) else act.value
                outputs.add(EventPattern(act.attribute, value))
        result[h.name] = (frozenset(inputs), frozenset(outputs))
    return result
