"""Generate one reference page per graphlie module, plus the literate navigation."""

from pathlib import Path

import mkdocs_gen_files

PACKAGE = Path("graphlie")

nav = mkdocs_gen_files.Nav()

for path in sorted(PACKAGE.glob("*.py")):
    if path.stem == "__main__":
        continue
    parts = [PACKAGE.name] if path.stem == "__init__" else [PACKAGE.name, path.stem]
    doc_path = Path(*parts[1:], "index.md") if path.stem == "__init__" else Path(f"{path.stem}.md")
    nav[parts] = doc_path.as_posix()

    with mkdocs_gen_files.open(Path("reference", doc_path), "w") as fd:
        print("::: " + ".".join(parts), file=fd)

    mkdocs_gen_files.set_edit_path(Path("reference", doc_path), Path("..") / path)

with mkdocs_gen_files.open("reference/SUMMARY.md", "w") as nav_file:
    nav_file.writelines(nav.build_literate_nav())
