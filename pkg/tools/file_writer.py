"""
tools/file_writer.py

Writes an enhanced system to an output directory:

    <system>.cba        the enhanced architecture
    <component>.lts     one behavior per component (decoupled, routers, wrapper)
    glue.lts            the composite coordinator of the new glue block
    glue.dot            the same composite as a graph
    manifest.yaml       inputs, verdicts, metrics and output digests
"""
import logging
from pathlib import Path
from typing import Union

from config import GLUE_DOT_NAME, GLUE_LTS_NAME, MANIFEST_NAME
from schemas.system_spec import CBASystem
from synthesis.glue import EnhancedGlue
from tools.dot_export import dot_text
from tools.lts_writer import behavior_file, format_lts, format_system
from tools.manifest import RunManifest
from tools.safe_writer import SafeWriter

logger = logging.getLogger(__name__)


def write_outputs(
    out_dir: Union[str, Path],
    enhanced: CBASystem,
    glue: EnhancedGlue,
    manifest: RunManifest,
) -> RunManifest:
    logger.info(f"[WRITER] Writing {enhanced.name} to {out_dir} ...")
    writer = SafeWriter(out_dir)

    # ---------- Architecture ----------
    writer.write(f"{enhanced.name}.cba", format_system(enhanced))

    # ---------- Behaviors ----------
    for component in enhanced.components:
        writer.write(behavior_file(component), format_lts(component.behavior))

    # ---------- Glue ----------
    glue_text = format_lts(glue.composite)
    writer.write(GLUE_LTS_NAME, glue_text)
    writer.write(GLUE_DOT_NAME, dot_text(glue.composite.canonical()))

    manifest.lts["glue"] = glue_text
    manifest.outputs.update(writer.written)

    # ---------- Manifest ----------
    # lists every file above; it cannot list itself
    writer.write(MANIFEST_NAME, manifest.dump())
    logger.info(f"[WRITER] {len(manifest.outputs)} file(s) written ✅")
    return manifest
