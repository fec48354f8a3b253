"""Recursive-descent parser for the supported Solidity subset.

Single-file, non-inheriting contracts only. Constructs the analysis never
models (inheritance lists, libraries, interfaces, inline assembly,
``using .. for``) raise UnsupportedConstruct so a file is skipped loudly
instead of analyzed wrong.
"""

from __future__ import annotations

from .errors import ParseError, UnsupportedConstruct
from .lexer import Token, TokenKind, is_type_keyword, tokenize
from .nodes import (
    ASSIGN_OPS,
    Binary,
    Block,
    Call,
    Contract,
    EmitStmt,
    Event,
    Expr,
    ExprStmt,
    ForStmt,
    Function,
    Ident,
    IfStmt,
    Index,
    Literal,
    Member,
    ModifierDef,
    New,
    Parameter,
    ReturnStmt,
    SourceUnit,
    StateVariable,
    Stmt,
    Ternary,
    TupleExpr,
    Unary,
    VarDeclStmt,
    WhileStmt,
    expr_source,
)

_VISIBILITY = ("public", "private", "internal", "external")
_MUTABILITY = ("pure", "view", "payable")
_LOCATIONS = ("memory", "storage", "calldata")

# Constructs we recognize but deliberately refuse to model.
_UNSUPPORTED_TOP = {
    "import": "import directive",
    "library": "library definition",
    "interface": "interface definition",
    "abstract": "abstract contract",
    "using": "using-for directive",
    "function": "free function",
}
_UNSUPPORTED_MEMBER = {
    "using": "using-for directive",
    "assembly": "inline assembly",
}
_UNSUPPORTED_STMT = {
    "assembly": "inline assembly",
    "do": "do-while loop",
    "try": "try/catch",
    "continue": "loop continue",
    "break": "loop break",
}


class _Parser:
    def __init__(self, tokens: list[Token], path: str):
        self.tokens = tokens
        self.pos = 0
        self.path = path

    # -- token helpers -----------------------------------------------------

    def peek(self, offset: int = 0) -> Token:
        i = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[i]

    def at(self, text: str) -> bool:
        return self.peek().text == text and self.peek().kind is not TokenKind.STRING

    def at_kind(self, kind: TokenKind) -> bool:
        return self.peek().kind is kind

    def advance(self) -> Token:
        tok = self.peek()
        if tok.kind is not TokenKind.EOF:
            self.pos += 1
        return tok

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.text != text or tok.kind is TokenKind.STRING:
            got = tok.text if tok.kind is not TokenKind.EOF else "end of input"
            raise ParseError(f"expected {text!r}, found {got!r}", tok.line, tok.column)
        return self.advance()

    def expect_identifier(self, what: str = "identifier") -> Token:
        tok = self.peek()
        if tok.kind is not TokenKind.IDENTIFIER:
            raise ParseError(f"expected {what}, found {tok.text!r}", tok.line, tok.column)
        return self.advance()

    def fail(self, message: str) -> ParseError:
        tok = self.peek()
        return ParseError(message, tok.line, tok.column)

    def unsupported(self, construct: str) -> UnsupportedConstruct:
        tok = self.peek()
        return UnsupportedConstruct(construct, tok.line, tok.column)

    # -- top level ----------------------------------------------------------

    def parse_unit(self) -> SourceUnit:
        unit = SourceUnit(path=self.path)
        while not self.at_kind(TokenKind.EOF):
            if self.at("pragma"):
                pragma = self._parse_pragma()
                if pragma is not None and unit.pragma is None:
                    unit.pragma = pragma
            elif self.at("contract"):
                unit.contracts.append(self._parse_contract())
            elif self.peek().text in _UNSUPPORTED_TOP:
                raise self.unsupported(_UNSUPPORTED_TOP[self.peek().text])
            else:
                raise self.fail(
                    f"expected 'pragma' or 'contract', found {self.peek().text!r}"
                )
        return unit

    def _parse_pragma(self) -> str | None:
        self.expect("pragma")
        name = self.advance().text
        parts: list[str] = []
        while not self.at(";") and not self.at_kind(TokenKind.EOF):
            parts.append(self.advance().text)
        self.expect(";")
        return "".join(parts) if name == "solidity" else None

    def _parse_contract(self) -> Contract:
        start = self.expect("contract")
        name = self.expect_identifier("contract name").text
        if self.at("is"):
            raise self.unsupported("inheritance list")
        self.expect("{")
        contract = Contract(name=name, line=start.line)
        while not self.at("}"):
            if self.at_kind(TokenKind.EOF):
                raise self.fail(f"unterminated contract {name!r}")
            self._parse_member(contract)
        self.expect("}")
        self._finalize_keys(contract)
        return contract

    def _finalize_keys(self, contract: Contract) -> None:
        # name/arity keys; a rare same-name same-arity overload set gets
        # ordinal suffixes so keys stay unique.
        seen: dict[str, int] = {}
        for fn in contract.functions:
            base = f"{fn.name}/{fn.arity}"
            count = seen.get(base, 0)
            seen[base] = count + 1
            fn.key = base if count == 0 else f"{base}#{count + 1}"

    # -- contract members ---------------------------------------------------

    def _parse_member(self, contract: Contract) -> None:
        tok = self.peek()
        if tok.text in _UNSUPPORTED_MEMBER:
            raise self.unsupported(_UNSUPPORTED_MEMBER[tok.text])
        if self.at("function"):
            contract.functions.append(self._parse_function())
        elif self.at("constructor"):
            contract.functions.append(self._parse_special("constructor"))
        elif self.at("fallback"):
            contract.functions.append(self._parse_special("fallback"))
        elif self.at("receive"):
            contract.functions.append(self._parse_special("receive"))
        elif self.at("event"):
            contract.events.append(self._parse_event())
        elif self.at("modifier"):
            contract.modifiers.append(self._parse_modifier())
        elif self.at("struct"):
            self._skip_struct()
        elif self.at("enum"):
            self._skip_enum()
        else:
            contract.state_variables.append(self._parse_state_variable(contract.name))

    def _parse_state_variable(self, contract_name: str) -> StateVariable:
        start = self.peek()
        type_name = self._parse_type_name()
        visibility = "internal"
        is_constant = False
        while True:
            tok = self.peek()
            if tok.text in ("public", "private", "internal"):
                visibility = self.advance().text
            elif tok.text in ("constant", "immutable"):
                # immutable variables are write-frozen after deployment,
                # so they behave like constants for conflict purposes
                is_constant = True
                self.advance()
            elif tok.text in ("override", "virtual"):
                raise self.unsupported(f"{tok.text} state variable")
            else:
                break
        name = self.expect_identifier("state variable name").text
        initializer = None
        if self.accept("="):
            initializer = self._parse_expression()
        self.expect(";")
        return StateVariable(
            name=name,
            type_name=type_name,
            visibility=visibility,
            is_constant=is_constant,
            declaring_contract=contract_name,
            line=start.line,
            initializer=initializer,
        )

    def _parse_event(self) -> Event:
        self.expect("event")
        name = self.expect_identifier("event name").text
        params = self._parse_parameter_list(allow_indexed=True)
        self.accept("anonymous")
        self.expect(";")
        return Event(name=name, parameters=params)

    def _parse_modifier(self) -> ModifierDef:
        start = self.expect("modifier")
        name = self.expect_identifier("modifier name").text
        params: list[Parameter] = []
        if self.at("("):
            params = self._parse_parameter_list()
        body = self._parse_block()
        return ModifierDef(name=name, parameters=params, body=body, line=start.line)

    def _parse_function(self) -> Function:
        start = self.expect("function")
        name = self.expect_identifier("function name").text
        fn = Function(name=name, line=start.line)
        fn.parameters = self._parse_parameter_list()
        self._parse_function_attributes(fn)
        self._parse_function_body(fn)
        return fn

    def _parse_special(self, kind: str) -> Function:
        start = self.advance()
        fn = Function(
            name=kind,
            line=start.line,
            is_constructor=kind == "constructor",
            is_fallback=kind == "fallback",
            is_receive=kind == "receive",
        )
        fn.parameters = self._parse_parameter_list()
        if not fn.is_constructor:
            fn.visibility = "external"
        self._parse_function_attributes(fn)
        self._parse_function_body(fn)
        return fn

    def _parse_function_attributes(self, fn: Function) -> None:
        while True:
            tok = self.peek()
            if tok.text in _VISIBILITY:
                fn.visibility = self.advance().text
            elif tok.text in _MUTABILITY:
                fn.mutability = self.advance().text
            elif tok.text in ("virtual", "override"):
                raise self.unsupported(f"{tok.text} function")
            elif tok.text == "returns":
                self.advance()
                fn.returns = self._parse_parameter_list()
            elif tok.kind is TokenKind.IDENTIFIER:
                # modifier invocation, with or without arguments
                ident = self.advance()
                callee = Ident(line=ident.line, name=ident.text)
                args: list[Expr] = []
                if self.at("("):
                    args = self._parse_call_args()
                fn.modifier_invocations.append(Call(line=ident.line, callee=callee, args=args))
            else:
                break

    def _parse_function_body(self, fn: Function) -> None:
        if self.accept(";"):
            fn.body = None
            fn.span = (fn.line, fn.line)
            return
        fn.body = self._parse_block()
        fn.span = (fn.line, self.tokens[self.pos - 1].line)

    def _parse_parameter_list(self, allow_indexed: bool = False) -> list[Parameter]:
        self.expect("(")
        params: list[Parameter] = []
        while not self.at(")"):
            type_name = self._parse_type_name()
            location = "default"
            while True:
                tok = self.peek()
                if tok.text in _LOCATIONS:
                    location = self.advance().text
                elif allow_indexed and tok.text == "indexed":
                    self.advance()
                else:
                    break
            name = ""
            if self.at_kind(TokenKind.IDENTIFIER):
                name = self.advance().text
            params.append(Parameter(name=name, type_name=type_name, location=location))
            if not self.at(")"):
                self.expect(",")
        self.expect(")")
        return params

    # -- types ----------------------------------------------------------------

    def _parse_type_name(self) -> str:
        tok = self.peek()
        if tok.text == "mapping":
            self.advance()
            self.expect("(")
            key = self._parse_type_name()
            if self.at_kind(TokenKind.IDENTIFIER):
                self.advance()  # optional named mapping key
            self.expect("=>")
            value = self._parse_type_name()
            if self.at_kind(TokenKind.IDENTIFIER):
                self.advance()
            self.expect(")")
            base = f"mapping({key} => {value})"
        elif tok.kind is TokenKind.KEYWORD and is_type_keyword(tok.text):
            base = self.advance().text
            if base == "address" and self.at("payable"):
                self.advance()
                base = "address payable"
        elif tok.kind is TokenKind.IDENTIFIER:
            base = self.advance().text  # user-declared type (struct/enum/contract)
        else:
            raise self.fail(f"expected type name, found {tok.text!r}")
        while self.at("["):
            self.advance()
            if self.at("]"):
                self.advance()
                base += "[]"
            else:
                size = self._parse_expression()
                self.expect("]")
                base += f"[{expr_source(size)}]"
        return base

    def _looks_like_type_start(self) -> bool:
        tok = self.peek()
        if tok.text == "mapping":
            return True
        return tok.kind is TokenKind.KEYWORD and is_type_keyword(tok.text)

    def _looks_like_declaration(self) -> bool:
        """Lookahead for `Type [loc] name` without consuming tokens."""
        if self._looks_like_type_start():
            return True
        if not self.at_kind(TokenKind.IDENTIFIER):
            return False
        saved = self.pos
        try:
            self.advance()
            while self.at("["):
                depth = 0
                while True:
                    if self.at_kind(TokenKind.EOF):
                        return False
                    t = self.advance().text
                    if t == "[":
                        depth += 1
                    elif t == "]":
                        depth -= 1
                        if depth == 0:
                            break
            while self.peek().text in _LOCATIONS:
                self.advance()
            return self.at_kind(TokenKind.IDENTIFIER)
        finally:
            self.pos = saved

    # -- structs/enums: accepted, validated, not modeled (no storage of their own)

    def _skip_struct(self) -> None:
        self.expect("struct")
        self.expect_identifier("struct name")
        self.expect("{")
        while not self.at("}"):
            if self.at_kind(TokenKind.EOF):
                raise self.fail("unterminated struct definition")
            self._parse_type_name()
            self.expect_identifier("struct member name")
            self.expect(";")
        self.expect("}")

    def _skip_enum(self) -> None:
        self.expect("enum")
        self.expect_identifier("enum name")
        self.expect("{")
        while not self.at("}"):
            if self.at_kind(TokenKind.EOF):
                raise self.fail("unterminated enum definition")
            self.expect_identifier("enum member")
            if not self.at("}"):
                self.expect(",")
        self.expect("}")

    # -- statements -------------------------------------------------------------

    def _parse_block(self) -> Block:
        start = self.expect("{")
        stmts: list[Stmt] = []
        while not self.at("}"):
            if self.at_kind(TokenKind.EOF):
                raise self.fail("unterminated block")
            stmts.append(self._parse_statement())
        self.expect("}")
        return Block(line=start.line, statements=stmts)

    def _parse_statement(self) -> Stmt:
        tok = self.peek()
        if tok.text in _UNSUPPORTED_STMT:
            raise self.unsupported(_UNSUPPORTED_STMT[tok.text])
        if self.at("{"):
            return self._parse_block()
        if self.at("unchecked"):
            # only changes arithmetic overflow semantics; a plain block here
            self.advance()
            return self._parse_block()
        if self.at("if"):
            return self._parse_if()
        if self.at("for"):
            return self._parse_for()
        if self.at("while"):
            return self._parse_while()
        if self.at("return"):
            start = self.advance()
            value = None if self.at(";") else self._parse_expression()
            self.expect(";")
            return ReturnStmt(line=start.line, value=value)
        if self.at("emit"):
            start = self.advance()
            call = self._parse_expression()
            if not isinstance(call, Call):
                raise self.fail("expected event call after 'emit'")
            self.expect(";")
            return EmitStmt(line=start.line, call=call)
        if self._looks_like_declaration():
            return self._parse_var_decl_statement()
        start = self.peek()
        expr = self._parse_expression()
        self.expect(";")
        return ExprStmt(line=start.line, expr=expr)

    def _parse_var_decl_statement(self) -> VarDeclStmt:
        start = self.peek()
        type_name = self._parse_type_name()
        location = "default"
        while self.peek().text in _LOCATIONS:
            location = self.advance().text
        name = self.expect_identifier("variable name").text
        init = None
        if self.accept("="):
            init = self._parse_expression()
        self.expect(";")
        return VarDeclStmt(
            line=start.line, type_name=type_name, location=location, name=name, init=init
        )

    def _parse_if(self) -> IfStmt:
        start = self.expect("if")
        self.expect("(")
        cond = self._parse_expression()
        self.expect(")")
        then = self._parse_statement()
        otherwise = None
        if self.accept("else"):
            otherwise = self._parse_statement()
        return IfStmt(line=start.line, cond=cond, then=then, otherwise=otherwise)

    def _parse_for(self) -> ForStmt:
        start = self.expect("for")
        self.expect("(")
        init: Stmt | None = None
        if self.accept(";"):
            pass
        elif self._looks_like_declaration():
            init = self._parse_var_decl_statement()
        else:
            expr = self._parse_expression()
            self.expect(";")
            init = ExprStmt(line=expr.line, expr=expr)
        cond = None if self.at(";") else self._parse_expression()
        self.expect(";")
        post = None if self.at(")") else self._parse_expression()
        self.expect(")")
        body = self._parse_statement()
        return ForStmt(line=start.line, init=init, cond=cond, post=post, body=body)

    def _parse_while(self) -> WhileStmt:
        start = self.expect("while")
        self.expect("(")
        cond = self._parse_expression()
        self.expect(")")
        body = self._parse_statement()
        return WhileStmt(line=start.line, cond=cond, body=body)

    # -- expressions -------------------------------------------------------------

    def _parse_expression(self) -> Expr:
        return self._parse_assignment()

    def _parse_assignment(self) -> Expr:
        left = self._parse_ternary()
        tok = self.peek()
        if tok.kind is TokenKind.OPERATOR and tok.text in ASSIGN_OPS:
            op = self.advance().text
            right = self._parse_assignment()  # right-associative
            return Binary(line=tok.line, op=op, left=left, right=right)
        return left

    def _parse_ternary(self) -> Expr:
        cond = self._parse_binary(0)
        if self.at("?"):
            tok = self.advance()
            then = self._parse_expression()
            self.expect(":")
            other = self._parse_ternary()
            return Ternary(line=tok.line, cond=cond, then=then, other=other)
        return cond

    _BINARY_LEVELS: tuple[tuple[str, ...], ...] = (
        ("||",),
        ("&&",),
        ("|",),
        ("^",),
        ("&",),
        ("==", "!="),
        ("<", ">", "<=", ">="),
        ("<<", ">>"),
        ("+", "-"),
        ("*", "/", "%"),
        ("**",),
    )

    def _parse_binary(self, level: int) -> Expr:
        if level >= len(self._BINARY_LEVELS):
            return self._parse_unary()
        ops = self._BINARY_LEVELS[level]
        left = self._parse_binary(level + 1)
        while self.peek().kind is TokenKind.OPERATOR and self.peek().text in ops:
            tok = self.advance()
            right = self._parse_binary(level + 1)
            left = Binary(line=tok.line, op=tok.text, left=left, right=right)
        return left

    def _parse_unary(self) -> Expr:
        tok = self.peek()
        if tok.kind is TokenKind.OPERATOR and tok.text in ("!", "~", "-", "+", "++", "--"):
            self.advance()
            operand = self._parse_unary()
            return Unary(line=tok.line, op=tok.text, operand=operand, prefix=True)
        if tok.text == "delete":
            self.advance()
            operand = self._parse_unary()
            return Unary(line=tok.line, op="delete", operand=operand, prefix=True)
        return self._parse_postfix()

    def _parse_postfix(self) -> Expr:
        expr = self._parse_primary()
        while True:
            tok = self.peek()
            if self.at("("):
                expr = Call(line=tok.line, callee=expr, args=self._parse_call_args())
            elif self.at("["):
                self.advance()
                index = self._parse_expression()
                self.expect("]")
                expr = Index(line=tok.line, base=expr, index=index)
            elif self.at("."):
                self.advance()
                member = self.peek()
                if member.kind not in (TokenKind.IDENTIFIER, TokenKind.KEYWORD):
                    raise self.fail("expected member name after '.'")
                self.advance()
                expr = Member(line=tok.line, base=expr, member=member.text)
            elif tok.kind is TokenKind.OPERATOR and tok.text in ("++", "--"):
                self.advance()
                expr = Unary(line=tok.line, op=tok.text, operand=expr, prefix=False)
            elif self.at("{") and isinstance(expr, (Member, Ident, New)):
                # f{value: ...}(...) / new C{salt: ...}(...)
                raise self.unsupported("call options block")
            else:
                return expr

    def _parse_call_args(self) -> list[Expr]:
        self.expect("(")
        args: list[Expr] = []
        while not self.at(")"):
            if self.at("{"):
                raise self.unsupported("call options block")
            args.append(self._parse_expression())
            if not self.at(")"):
                self.expect(",")
        self.expect(")")
        return args

    def _parse_primary(self) -> Expr:
        tok = self.peek()
        if tok.kind is TokenKind.NUMBER:
            self.advance()
            return Literal(line=tok.line, text=tok.text, kind="number")
        if tok.kind is TokenKind.STRING:
            self.advance()
            return Literal(line=tok.line, text=tok.text, kind="string")
        if tok.text in ("true", "false"):
            self.advance()
            return Literal(line=tok.line, text=tok.text, kind="bool")
        if tok.text == "new":
            self.advance()
            return New(line=tok.line, type_name=self._parse_type_name())
        if tok.kind is TokenKind.IDENTIFIER:
            self.advance()
            return Ident(line=tok.line, name=tok.text)
        if tok.kind is TokenKind.KEYWORD and (
            is_type_keyword(tok.text) or tok.text in ("this", "type", "payable")
        ):
            # elementary type used as a cast callee, e.g. uint256(x)
            self.advance()
            return Ident(line=tok.line, name=tok.text)
        if self.at("("):
            self.advance()
            items: list[Expr] = []
            while not self.at(")"):
                items.append(self._parse_expression())
                if not self.at(")"):
                    self.expect(",")
            self.expect(")")
            if len(items) == 1:
                return items[0]  # plain grouping
            return TupleExpr(line=tok.line, items=items)
        if tok.text in _UNSUPPORTED_STMT:
            raise self.unsupported(_UNSUPPORTED_STMT[tok.text])
        raise self.fail(f"expected expression, found {tok.text!r}")


def parse(source: str, path: str = "<string>") -> SourceUnit:
    """Parse source text into a SourceUnit.

    Raises LexError/ParseError for malformed input and UnsupportedConstruct
    for Solidity features outside the modeled subset.
    """
    tokens = tokenize(source)
    return _Parser(tokens, path).parse_unit()
