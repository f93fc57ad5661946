"""
MiniSvc, a small curly-brace language for annotated service source code

MiniSvc captures the constructs which the extraction analysis consumes: classes with
annotations, interfaces and their implementations, annotated fields, and method bodies
made of calls, constructions and typed local declarations. Recognised annotations are

* ``@RequestMapping("path")`` on methods (entry-points) and on classes (route prefix)
* ``@Controller("name")`` on classes
* ``@Document`` on entity classes
* ``@PersonalData`` on entity fields
* ``@Description("text")`` on classes and entry-points

Other annotations are kept in the syntax tree and ignored by the analysis.
"""
from purposegraph.minisvc.lexer import tokenize  # noqa: F401
from purposegraph.minisvc.parser import parse, parse_source  # noqa: F401
from purposegraph.minisvc.printer import format_unit  # noqa: F401
from purposegraph.minisvc.tokens import Token, TokenKind  # noqa: F401
