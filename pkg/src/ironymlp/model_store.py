"""Lossless single-file persistence for trained ensembles.

The container is a zip archive holding a small JSON manifest (strings,
ints, layout) plus one .npy entry per real-valued array, so every 64-bit
float round-trips bit-exactly.  Entries are written with a fixed timestamp
and sorted JSON keys, which makes two saves of the same model byte
identical.  A `format_version` tag guards against reading foreign or
future files.
"""

import io
import json
import zipfile
from pathlib import Path

import numpy as np

from . import mlp, ngrams
from .brown import BrownClustering
from .corpus import EmbeddingTable, ResourceBundle
from .ensemble import EnsembleModel
from .errors import IntegrityError
from .lsi import LsiModel
from .pipeline import BlockSpec, FeatureConfig, FeaturePipeline
from .tokenization import PosTaggerModel, TAGSET

FORMAT_VERSION = 1
_KIND = "ironymlp-ensemble"
_FIXED_DATE = (1980, 1, 1, 0, 0, 0)


def _write_entry(archive: zipfile.ZipFile, name: str, payload: bytes) -> None:
    info = zipfile.ZipInfo(name, date_time=_FIXED_DATE)
    info.compress_type = zipfile.ZIP_DEFLATED
    archive.writestr(info, payload)


def _write_array(archive: zipfile.ZipFile, name: str, array: np.ndarray) -> None:
    buffer = io.BytesIO()
    np.save(buffer, np.asarray(array), allow_pickle=False)
    _write_entry(archive, f"arrays/{name}.npy", buffer.getvalue())


def _read_array(archive: zipfile.ZipFile, name: str) -> np.ndarray:
    try:
        payload = archive.read(f"arrays/{name}.npy")
    except KeyError as exc:
        raise IntegrityError(f"model container misses array {name!r}") from exc
    return np.load(io.BytesIO(payload), allow_pickle=False)


def save_model(model: EnsembleModel, path) -> None:
    """Serialize a fully fitted ensemble (pipeline + members + resources)."""
    pipeline = model.pipeline
    if pipeline is None or pipeline.scale_mask is None or not model.members:
        raise IntegrityError("cannot save an unfitted ensemble")
    resources = pipeline.resources
    manifest = {
        "task": model.task,
        "n_folds": model.n_folds,
        "fold_assignment": {str(k): v for k, v in model.fold_assignment.items()},
        "mlp_config": {
            "hidden_sizes": list(model.config.hidden_sizes),
            "learning_rate": model.config.learning_rate,
            "l2": model.config.l2,
            "max_epochs": model.config.max_epochs,
            "early_stop_patience": model.config.early_stop_patience,
            "batch_size": model.config.batch_size,
            "seed": model.config.seed,
        },
        "feature_config": {
            "lexical": pipeline.config.lexical,
            "syntactic": pipeline.config.syntactic,
            "semantic": pipeline.config.semantic,
            "polarity": pipeline.config.polarity,
            "word_top_k": pipeline.config.word_top_k,
            "char_top_k": pipeline.config.char_top_k,
            "lsi_k": pipeline.config.lsi_k,
            "lsi_min_df": pipeline.config.lsi_min_df,
            "lsi_method": pipeline.config.lsi_method,
            "brown_counts": list(pipeline.config.brown_counts),
            "brown_min_count": pipeline.config.brown_min_count,
            "embedding_dim": pipeline.config.embedding_dim,
        },
        "layout": [
            {"name": b.name, "family": b.family, "offset": b.offset, "width": b.width}
            for b in pipeline.layout
        ],
        "resources": {
            "positive_lexicon": sorted(resources.positive_lexicon),
            "negative_lexicon": sorted(resources.negative_lexicon),
            "normalization_dict": resources.normalization_dict,
            "emoji_map": resources.emoji_map,
            "emoji_polarity": resources.emoji_polarity,
            "negation_words": sorted(resources.negation_words),
            "embedding_tokens": sorted(resources.embeddings.vectors),
            "embedding_dim": resources.embeddings.dim,
        },
        "tagger_features": sorted(pipeline.tagger.weights),
    }
    if pipeline.word_vocab is not None:
        manifest["word_vocab"] = {"grams": list(pipeline.word_vocab.grams)}
        manifest["char_vocab"] = {"grams": list(pipeline.char_vocab.grams)}
    if pipeline.lsi_model is not None:
        manifest["lsi"] = {
            "terms": sorted(pipeline.lsi_model.term_index, key=pipeline.lsi_model.term_index.get),
            "k": pipeline.lsi_model.k,
        }
    if pipeline.clusterings:
        manifest["brown"] = [
            {
                "C": c.C,
                "ami": c.ami,
                "vocab_order": list(c.vocab_order),
                "clusters": [c.assignment[w] for w in c.vocab_order],
            }
            for c in pipeline.clusterings
        ]

    with zipfile.ZipFile(path, "w") as archive:
        _write_entry(
            archive,
            "format.json",
            json.dumps({"format_version": FORMAT_VERSION, "kind": _KIND}).encode("utf-8"),
        )
        _write_entry(
            archive,
            "manifest.json",
            json.dumps(manifest, sort_keys=True, ensure_ascii=False).encode("utf-8"),
        )
        if pipeline.word_vocab is not None:
            _write_array(archive, "word_idf", pipeline.word_vocab.idf)
            _write_array(archive, "char_idf", pipeline.char_vocab.idf)
        if pipeline.pos_vocab is not None:
            _write_array(archive, "pos_idf", pipeline.pos_vocab.idf)
        if pipeline.lsi_model is not None:
            _write_array(archive, "lsi_idf", pipeline.lsi_model.idf)
            _write_array(archive, "lsi_U", pipeline.lsi_model.U)
            _write_array(archive, "lsi_sigma", pipeline.lsi_model.sigma)
        _write_array(archive, "scale_mask", pipeline.scale_mask)
        _write_array(archive, "scale_mean", pipeline.scale_mean)
        _write_array(archive, "scale_std", pipeline.scale_std)
        tokens = manifest["resources"]["embedding_tokens"]
        emb = np.zeros((len(tokens), resources.embeddings.dim))
        for row, token in enumerate(tokens):
            emb[row] = resources.embeddings.vectors[token]
        _write_array(archive, "embeddings", emb)
        tagger_matrix = np.zeros((len(manifest["tagger_features"]), len(TAGSET)))
        for row, feat in enumerate(manifest["tagger_features"]):
            tagger_matrix[row] = pipeline.tagger.weights[feat]
        _write_array(archive, "tagger_weights", tagger_matrix)
        for i, member in enumerate(model.members):
            for layer, (w, b) in enumerate(zip(member.weights, member.biases), start=1):
                _write_array(archive, f"member{i}_W{layer}", w)
                _write_array(archive, f"member{i}_b{layer}", b)


def load_model(path) -> EnsembleModel:
    """Inverse of save_model; predictions of the loaded model are bit-identical."""
    path = Path(path)
    if not path.exists():
        raise IntegrityError(f"model file not found: {path}")
    try:
        archive = zipfile.ZipFile(path)
    except (zipfile.BadZipFile, OSError) as exc:
        raise IntegrityError(f"not a readable model container: {path} ({exc})") from exc
    with archive:
        try:
            fmt = json.loads(archive.read("format.json"))
        except KeyError as exc:
            raise IntegrityError("model container misses the format tag") from exc
        if fmt.get("kind") != _KIND:
            raise IntegrityError(f"not an {_KIND} file")
        if fmt.get("format_version") != FORMAT_VERSION:
            raise IntegrityError(
                f"unsupported model format version {fmt.get('format_version')} "
                f"(this build reads version {FORMAT_VERSION})"
            )
        try:
            manifest = json.loads(archive.read("manifest.json"))
        except KeyError as exc:
            raise IntegrityError("model container misses the manifest") from exc

        res = manifest["resources"]
        tokens = res["embedding_tokens"]
        emb_matrix = _read_array(archive, "embeddings")
        embeddings = EmbeddingTable(
            dim=res["embedding_dim"],
            vectors={t: emb_matrix[i] for i, t in enumerate(tokens)},
        )
        resources = ResourceBundle(
            embeddings=embeddings,
            positive_lexicon=frozenset(res["positive_lexicon"]),
            negative_lexicon=frozenset(res["negative_lexicon"]),
            normalization_dict=res["normalization_dict"],
            emoji_map=res["emoji_map"],
            emoji_polarity=res["emoji_polarity"],
            negation_words=frozenset(res["negation_words"]),
        )
        tagger_matrix = _read_array(archive, "tagger_weights")
        tagger = PosTaggerModel(
            weights={f: tagger_matrix[i] for i, f in enumerate(manifest["tagger_features"])}
        )
        fc = manifest["feature_config"]
        config = FeatureConfig(
            lexical=fc["lexical"],
            syntactic=fc["syntactic"],
            semantic=fc["semantic"],
            polarity=fc["polarity"],
            word_top_k=fc["word_top_k"],
            char_top_k=fc["char_top_k"],
            lsi_k=fc["lsi_k"],
            lsi_min_df=fc["lsi_min_df"],
            lsi_method=fc["lsi_method"],
            brown_counts=tuple(fc["brown_counts"]),
            brown_min_count=fc["brown_min_count"],
            embedding_dim=fc["embedding_dim"],
        )
        pipeline = FeaturePipeline(config=config, resources=resources, tagger=tagger)
        if "word_vocab" in manifest:
            pipeline.word_vocab = ngrams.NgramVocabulary(
                level=ngrams.WORD_LEVEL,
                grams=tuple(manifest["word_vocab"]["grams"]),
                idf=_read_array(archive, "word_idf"),
                top_k=config.word_top_k,
            )
            pipeline.char_vocab = ngrams.NgramVocabulary(
                level=ngrams.CHAR_LEVEL,
                grams=tuple(manifest["char_vocab"]["grams"]),
                idf=_read_array(archive, "char_idf"),
                top_k=config.char_top_k,
            )
        if config.syntactic:
            pipeline.pos_vocab = ngrams.PosVocabulary(idf=_read_array(archive, "pos_idf"))
        if "lsi" in manifest:
            terms = manifest["lsi"]["terms"]
            pipeline.lsi_model = LsiModel(
                term_index={t: i for i, t in enumerate(terms)},
                idf=_read_array(archive, "lsi_idf"),
                U=_read_array(archive, "lsi_U"),
                sigma=_read_array(archive, "lsi_sigma"),
                k=manifest["lsi"]["k"],
            )
        if "brown" in manifest:
            clusterings = []
            for entry in manifest["brown"]:
                words = entry["vocab_order"]
                clusterings.append(
                    BrownClustering(
                        C=entry["C"],
                        assignment=dict(zip(words, entry["clusters"])),
                        vocab_order=tuple(words),
                        ami=entry["ami"],
                    )
                )
            pipeline.clusterings = tuple(clusterings)
        pipeline.layout = tuple(
            BlockSpec(name=b["name"], family=b["family"], offset=b["offset"], width=b["width"])
            for b in manifest["layout"]
        )
        pipeline.scale_mask = _read_array(archive, "scale_mask")
        pipeline.scale_mean = _read_array(archive, "scale_mean")
        pipeline.scale_std = _read_array(archive, "scale_std")

        mc = manifest["mlp_config"]
        mlp_config = mlp.MlpConfig(
            hidden_sizes=tuple(mc["hidden_sizes"]),
            learning_rate=mc["learning_rate"],
            l2=mc["l2"],
            max_epochs=mc["max_epochs"],
            early_stop_patience=mc["early_stop_patience"],
            batch_size=mc["batch_size"],
            seed=mc["seed"],
        )
        members = []
        for i in range(manifest["n_folds"]):
            weights = [_read_array(archive, f"member{i}_W{layer}") for layer in (1, 2, 3)]
            biases = [_read_array(archive, f"member{i}_b{layer}") for layer in (1, 2, 3)]
            members.append(mlp.MlpModel(weights=weights, biases=biases))
        return EnsembleModel(
            pipeline=pipeline,
            members=members,
            fold_assignment={int(k): v for k, v in manifest["fold_assignment"].items()},
            task=manifest["task"],
            config=mlp_config,
        )
