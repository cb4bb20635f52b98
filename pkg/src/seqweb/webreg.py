"""URL-keyed page registry with pluggable loaders."""
from __future__ import annotations

from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import ImportCycle, PageNotFound, WrongPageKind
from .goals import (
    Clause, DPage, GPage, Goal, LinkD, LinkG, Page, Renaming,
    rename_symbols_in_clause, subst_goal,
)
from .syntax import parse_page
from .terms import FreshGen


class Loader:
    """Turns a URL into page source text, or None when it does not know it."""

    def load(self, url: str) -> Optional[str]:
        raise NotImplementedError

    def describe(self, url: str) -> str:
        return url


class InMemoryLoader(Loader):
    def __init__(self, pages: Optional[Dict[str, str]] = None):
        self.pages = dict(pages or {})

    def load(self, url):
        return self.pages.get(url)

    @classmethod
    def from_texts(cls, texts: Iterable[str]) -> "InMemoryLoader":
        pages = {}
        for text in texts:
            pages[parse_page(text).url] = text
        return cls(pages)


class FileMapLoader(Loader):
    """Serves ``<prefix>/.../<name>`` from ``<directory>/<name>.swb``."""

    def __init__(self, prefix: str, directory):
        self.prefix = prefix.rstrip("/")
        self.directory = Path(directory)

    @classmethod
    def parse(cls, text: str) -> "FileMapLoader":
        prefix, sep, directory = text.partition("=")
        if not sep or not prefix or not directory:
            raise ValueError("url map must look like <url-prefix>=<dir>, got %r" % text)
        return cls(prefix, directory)

    def path_for(self, url: str) -> Optional[Path]:
        if url != self.prefix and not url.startswith(self.prefix + "/"):
            return None
        name = url.rstrip("/").rsplit("/", 1)[-1]
        return self.directory / (name + ".swb")

    def load(self, url):
        path = self.path_for(url)
        if path is None or not path.is_file():
            return None
        return path.read_text(encoding="utf-8")

    def describe(self, url):
        return str(self.path_for(url))


def load_paths(paths: Sequence) -> InMemoryLoader:
    """Read ``.swb`` files (directories are scanned, sorted) into a loader
    keyed by each file's ``mod`` header."""
    pages: Dict[str, str] = {}
    files: List[Path] = []
    for p in map(Path, paths):
        if p.is_dir():
            files.extend(sorted(p.glob("*.swb")))
        else:
            files.append(p)
    seen = set()
    for f in files:
        if f.resolve() in seen:  # a file named alongside its directory
            continue
        seen.add(f.resolve())
        text = f.read_text(encoding="utf-8")
        page = parse_page(text, source=str(f))
        if page.url in pages:
            raise ValueError("%s: page %s defined twice" % (f, page.url))
        pages[page.url] = text
    return InMemoryLoader(pages)


class Registry:
    """Resolves URLs to pages, first loader wins, results cached.

    Treat as read-only once solving starts; the cache is only a memo.
    """

    def __init__(self, loaders: Sequence[Loader] = ()):
        self.loaders: Tuple[Loader, ...] = tuple(loaders)
        self._pages: Dict[str, Page] = {}
        self._clauses: Dict[str, tuple] = {}

    @classmethod
    def from_texts(cls, *texts: str) -> "Registry":
        return cls([InMemoryLoader.from_texts(texts)])

    def page(self, url: str) -> Page:
        page = self._pages.get(url)
        if page is not None:
            return page
        for loader in self.loaders:
            text = loader.load(url)
            if text is None:
                continue
            page = parse_page(text, source=loader.describe(url))
            if page.url != url:
                raise PageNotFound("%s declares mod(%s), expected %s"
                                   % (loader.describe(url), page.url, url))
            self._pages[url] = page
            return page
        raise PageNotFound("no page at %s" % url)

    def resolve_d(self, url: str, renames: tuple = ()) -> tuple:
        return self._rename(self._resolve_d(url, ()), renames)

    def _resolve_d(self, url: str, active: tuple) -> tuple:
        if url in active:
            raise ImportCycle("import cycle: %s" % " -> ".join(active + (url,)))
        cached = self._clauses.get(url)
        if cached is not None:
            return cached
        page = self.page(url)
        if not isinstance(page.content, DPage):
            raise WrongPageKind("%s is a goal page, used where clauses are expected" % url)
        out: List[Clause] = []
        for item in page.content.items:
            if isinstance(item, LinkD):
                out.extend(self._rename(self._resolve_d(item.url, active + (url,)), item.renames))
            else:
                out.append(item)
        result = tuple(out)
        self._clauses[url] = result
        return result

    @staticmethod
    def _rename(clauses: tuple, renames: tuple) -> tuple:
        if not renames:
            return clauses
        syms = dict(renames)
        return tuple(rename_symbols_in_clause(c, syms) for c in clauses)

    def resolve_g(self, url: str, gen: Optional[FreshGen] = None, level: int = 0) -> Goal:
        """The goal of a G-page with its variables renamed apart.

        A page whose goal is just another link is followed here, so a chain
        of pure links that loops is reported instead of recursing forever.
        """
        gen = gen or FreshGen()
        seen = []
        while True:
            if url in seen:
                raise ImportCycle("link cycle: %s" % " -> ".join(seen + [url]))
            seen.append(url)
            page = self.page(url)
            if not isinstance(page.content, GPage):
                raise WrongPageKind("%s is a clause page, used where a goal is expected" % url)
            goal = page.content.goal
            if isinstance(goal, LinkG):
                url = goal.url
                continue
            r = Renaming({n: gen.var(level, n) for n in page.content.vars})
            return subst_goal(goal, r)


def registry_from_dirs(load: Sequence = (), maps: Sequence[str] = ()) -> Registry:
    loaders: List[Loader] = []
    if load:
        loaders.append(load_paths(load))
    loaders.extend(FileMapLoader.parse(m) for m in maps)
    return Registry(loaders)

