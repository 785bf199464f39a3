"""
Command-line interface for linfdiff
"""

import argparse
import sys
from typing import List, Optional

from ..core import catalog
from ..core.config import SUITES, THREADS_ENV, ConfigManager, RunConfig, config_manager
from ..core.diffcore import diff
from ..core.documents import linf_to_document, load_input
from ..core.verify import VerificationRunner
from ..utils.exceptions import (ConfigurationException, LinfDiffException, MalformedJets, NotKan, NotReduced,
                                SchemaViolation)
from ..utils.file_utils import FileHandler, dumps
from ..utils.logger import get_logger, get_run_logger
from ..utils.schemas import SCHEMA_VERSION, CatalogListing, Document, dump

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_SCHEMA = 2
EXIT_NOT_KAN = 3


def exit_code_for(error: Exception) -> int:
    """Exit status of an aborted command"""
    if isinstance(error, (SchemaViolation, MalformedJets, ConfigurationException)):
        return EXIT_SCHEMA
    if isinstance(error, (NotKan, NotReduced)):
        return EXIT_NOT_KAN
    return EXIT_FAILED


class CLI:
    """Command-line interface for linfdiff"""

    def __init__(self, manager: Optional[ConfigManager] = None):
        self.manager = manager or config_manager
        self.config = self.manager.get_config()
        self.logger = get_logger(log_level=self.config.log_level, log_file=self.config.log_file)

    def setup_parser(self) -> argparse.ArgumentParser:
        """Setup command-line argument parser"""
        parser = argparse.ArgumentParser(
            prog="linfdiff",
            description="linfdiff - differentiate simplicial Lie algebras and formal ∞-groups into L∞ algebras",
            formatter_class=argparse.RawDescriptionHelpFormatter,
            epilog=f"""
Examples:
  %(prog)s catalog
  %(prog)s catalog --catalog sl2 --output sl2.json
  %(prog)s differentiate --input sl2.json --max-word 3 --max-level 4
  %(prog)s differentiate --catalog crossed-module-id --output cm.linf.json
  %(prog)s verify --suite shuffles --max-n 6
  %(prog)s verify --suite main --catalog sl2
  %(prog)s verify --suite doldkan --seed 7

Exit codes: 0 success, 1 failed verification, 2 schema violation,
3 input not Kan or not reduced. {THREADS_ENV} caps worker threads.
            """
        )

        parser.add_argument('--config', type=str, help='Path to configuration file')
        parser.add_argument('--verbose', '-v', action='store_true', help='Enable verbose logging')
        parser.add_argument('--quiet', '-q', action='store_true', help='Only log warnings and errors')

        window = argparse.ArgumentParser(add_help=False)
        window.add_argument('--max-word', type=int, help='Word-length bound K (default from config: 3)')
        window.add_argument('--max-level', type=int, help='Simplicial level bound N (default from config: 4)')
        window.add_argument('--output', type=str, help='Write the JSON document here instead of stdout')
        window.add_argument('--save', action='store_true',
                            help='Also write the document into the configured output directory')

        subparsers = parser.add_subparsers(dest='command', help='Available commands')

        differentiate = subparsers.add_parser('differentiate', parents=[window],
                                              help='Compute the L∞ algebra of an input document')
        source = differentiate.add_mutually_exclusive_group(required=True)
        source.add_argument('--input', type=str, help='Input document (lie, simplicial_lie, simplicial_vs or jets)')
        source.add_argument('--catalog', type=str, help='Differentiate a built-in catalog entry')

        verify = subparsers.add_parser('verify', parents=[window], help='Run verification suites')
        verify.add_argument('--suite', choices=SUITES, help='Suite to run (default: all)')
        verify.add_argument('--catalog', type=str, help='Restrict catalog-driven suites to one entry')
        verify.add_argument('--seed', type=int, help='Seed of the random trials')
        verify.add_argument('--max-n', type=int, help='Bound on p+q for the shuffle suite')

        listing = subparsers.add_parser('catalog', parents=[window], help='List or emit built-in examples')
        listing.add_argument('--catalog', type=str, help='Emit this entry as an input document')

        return parser

    def apply_args(self, args) -> RunConfig:
        """Apply command-line arguments on top of the configuration file"""
        if args.config:
            self.manager = ConfigManager(args.config)
            self.config = self.manager.get_config()

        log_level = self.config.log_level
        if args.verbose:
            log_level = 'DEBUG'
        if args.quiet:
            log_level = 'WARNING'
        self.logger = get_logger(log_level=log_level, log_file=self.config.log_file)

        return RunConfig.from_app_config(
            self.config,
            max_word=getattr(args, 'max_word', None),
            max_level=getattr(args, 'max_level', None),
            input=getattr(args, 'input', None),
            output=getattr(args, 'output', None),
            suite=getattr(args, 'suite', None),
            catalog=getattr(args, 'catalog', None),
            seed=getattr(args, 'seed', None),
            max_n=getattr(args, 'max_n', None),
        )

    def emit(self, document: Document, run: RunConfig, prefix: str, save: bool = False) -> None:
        """Write a document to --output, to stdout otherwise"""
        data = dump(document)
        indent = self.config.output.indent
        if run.output:
            FileHandler(".", self.logger, indent).save_json(data, run.output)
        else:
            sys.stdout.write(dumps(data, indent))
        if save:
            handler = FileHandler(self.config.output.output_dir, self.logger, indent)
            handler.save_json(data, handler.generate_filename(prefix, "json", self.config.output.include_timestamp))

    def run_differentiate(self, args, run: RunConfig) -> int:
        """Run differentiate command"""
        if run.input:
            data = FileHandler(".", self.logger).load_json(run.input)
            source = load_input(data, run.max_word, run.max_level)
        else:
            source = catalog.build(run.catalog, run.max_level)

        result = diff(source, run.max_word, run.max_level)
        L = result.algebra
        self.logger.info(f"Differentiated {L.name or 'input'}: tangent dims {L.tangent_dims()}, "
                         f"witness {result.witness_id}")
        document = linf_to_document(L, run.max_word, result.max_level, result.witness_id)
        self.emit(document, run, f"{L.name or 'linf'}.linf", args.save)
        return EXIT_OK

    def run_verify(self, args, run: RunConfig) -> int:
        """Run verify command"""
        run_logger = get_run_logger(self.logger)
        report = VerificationRunner(run, run_logger).run(run.suite)
        failed = [c.name for c in report.checks if not c.passed]
        if failed:
            self.logger.error(f"{len(failed)} of {len(report.checks)} checks failed")
        else:
            self.logger.info(f"All {len(report.checks)} checks passed")
        self.emit(report, run, f"report_{run.suite}", args.save)
        return EXIT_OK if report.passed else EXIT_FAILED

    def run_catalog(self, args, run: RunConfig) -> int:
        """Run catalog command"""
        if run.catalog:
            document = catalog.get_entry(run.catalog).document(run.max_level)
            self.emit(document, run, run.catalog, args.save)
        else:
            document = CatalogListing(schema_version=SCHEMA_VERSION, kind="catalog", entries=catalog.listing())
            self.emit(document, run, "catalog", args.save)
        return EXIT_OK

    def run(self, argv: Optional[List[str]] = None) -> int:
        """Main CLI entry point; returns the process exit code"""
        parser = self.setup_parser()
        args = parser.parse_args(argv)

        if not args.command:
            parser.print_help()
            return EXIT_OK

        commands = {
            'differentiate': self.run_differentiate,
            'verify': self.run_verify,
            'catalog': self.run_catalog,
        }

        try:
            run = self.apply_args(args)
            return commands[args.command](args, run)
        except LinfDiffException as e:
            self.logger.error(f"{type(e).__name__}: {e}")
            return exit_code_for(e)
        except KeyboardInterrupt:
            self.logger.warning("Operation cancelled by user")
            return EXIT_FAILED


def main(argv: Optional[List[str]] = None) -> int:
    """Main function for CLI"""
    return CLI().run(argv)


if __name__ == '__main__':
    sys.exit(main())
