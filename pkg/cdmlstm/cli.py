import argparse
import logging
import os
import sys

from . import __version__
from .abstract.errors import ConfigError, SchemaMismatchError
from .abstract.errors import TrainingDivergedError
from .abstract.messages import RolloutResult
from .abstract.schema import FeatureSchema
from .backend.cdm import filter_min_length, split_train_test
from .backend.forecasting import rollout_bands
from .backend.serialization import save_dataset, load_dataset
from .backend.serialization import load_checkpoint
from .config import RunConfig
from .datasets.utils import kelvins_schema, resolve_path
from .evaluation import persistence_baseline, evaluate_model, compare
from .models import param_count
from .optimization import fit, check_gradients
from .optimization.callbacks import SaveCheckpoint
from .pipelines import PreprocessKelvins, PredictNextCDM, RolloutEvent

LOGGER = logging.getLogger(__name__)
LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def configure_logging(verbose=False, quiet=False):
    level = logging.INFO
    if verbose:
        level = logging.DEBUG
    elif quiet:
        level = logging.WARNING
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr,
                        force=True)


def write_key_values(values, stream=None):
    stream = sys.stdout if stream is None else stream
    for key, value in values.items():
        stream.write('{} = {}\n'.format(key, value))


def write_table(table, filepath=None):
    if filepath is None:
        table.to_csv(sys.stdout, sep='\t', index=False, float_format='%.6g')
    else:
        table.to_csv(filepath, sep='\t', index=False, float_format='%.10g')


def _load_config(args, **overrides):
    """Reads ``--config`` and applies the flags given on the command line.
    """
    config = RunConfig()
    if getattr(args, 'config', None) is not None:
        config = RunConfig.load(resolve_path(args.config))
    return config.update(threads=args.threads, **overrides)


def cmd_preprocess(args):
    config = _load_config(args, min_length=args.min_length)
    schema = kelvins_schema()
    if args.schema is not None:
        schema = FeatureSchema.load(resolve_path(args.schema))
    preprocess = PreprocessKelvins(
        schema, config.min_length, args.skip_bad_rows)
    events = preprocess(resolve_path(args.input))
    save_dataset(args.out, events, schema)
    counts = preprocess.counts
    write_key_values({'records': counts['records'],
                      'dropped_missing': counts['dropped_missing'],
                      'dropped_sigma': counts['dropped_sigma'],
                      'cdms': counts['cdms'],
                      'events': counts['events'],
                      'events_min_length': counts['kept_events'],
                      'cdms_min_length': counts['kept_cdms']})
    return 0


def _run_config(args):
    return _load_config(
        args, epochs=args.epochs, batch_size=args.batch_size,
        learning_rate=args.learning_rate, dropout_rate=args.dropout_rate,
        hidden=args.hidden, layers=args.layers, seed=args.seed,
        test_fraction=args.test_fraction, min_length=args.min_length,
        checkpoint_every=args.checkpoint_every, clip_norm=args.clip_norm)


def cmd_train(args):
    config = _run_config(args)
    events, schema = load_dataset(resolve_path(args.data))
    sys.stdout.write(config.to_string())
    write_key_values({'params': param_count(
        schema.width, config.hidden, config.layers)})
    events = filter_min_length(events, config.min_length)
    split = split_train_test(events, config.test_fraction, config.seed)
    LOGGER.info('Split %d events into %d train and %d test',
                len(events), len(split.train), len(split.test))
    checkpoint = SaveCheckpoint(
        args.out, config.checkpoint_every, config.seed,
        {'test_fraction': config.test_fraction,
         'min_length': config.min_length})
    train_config = config.train_config(verbose=1 if args.verbose else 0)
    try:
        model, stats, history = fit(split, schema, train_config, [checkpoint])
    except TrainingDivergedError as error:
        if checkpoint.saved_epoch is not None:
            LOGGER.error('%s; last good checkpoint (epoch %d) written to %s',
                         error, checkpoint.saved_epoch, args.out)
        else:
            LOGGER.error('%s; no checkpoint written', error)
        return 1
    history_path = os.path.splitext(args.out)[0] + '_history.tsv'
    history.save(history_path)
    write_key_values({'checkpoint': args.out, 'history': history_path,
                      'final_loss': '{:.6g}'.format(history.loss[-1])})
    return 0


def _check_schema(dataset_schema, checkpoint_schema):
    if dataset_schema.names != checkpoint_schema.names:
        missing = [name for name in checkpoint_schema.names
                   if name not in dataset_schema.names]
        feature = missing[0] if missing else 'feature order'
        raise SchemaMismatchError(
            feature, 'Dataset does not match the checkpoint schema')


def _split_parameters(args, config, checkpoint):
    stored = checkpoint['split']
    if stored is None:
        LOGGER.warning('Checkpoint holds no split parameters; using '
                       'test_fraction %s and min_length %d',
                       config.test_fraction, config.min_length)
        return config.test_fraction, config.min_length
    for key in ('test_fraction', 'min_length'):
        value = getattr(args, key)
        if value is not None and value != stored[key]:
            raise ConfigError(
                '{} {} differs from the {} the checkpoint was trained '
                'with'.format(key, value, stored[key]))
    return stored['test_fraction'], stored['min_length']


def _evaluation_samples(args, config):
    if args.samples is not None:
        return args.samples
    return sorted(set([1, config.samples]))


def cmd_evaluate(args):
    config = _load_config(args, seed=args.seed,
                          test_fraction=args.test_fraction,
                          min_length=args.min_length)
    checkpoint = load_checkpoint(resolve_path(args.checkpoint))
    events, schema = load_dataset(resolve_path(args.data))
    _check_schema(schema, checkpoint['schema'])
    if args.split != 'all':
        test_fraction, min_length = _split_parameters(
            args, config, checkpoint)
        events = filter_min_length(events, min_length)
        split = split_train_test(events, test_fraction, checkpoint['seed'])
        events = split.test if args.split == 'test' else split.train
    model, stats = checkpoint['model'], checkpoint['stats']
    names = schema.names
    if not os.path.exists(args.out):
        os.makedirs(args.out)
    baseline = persistence_baseline(events, stats, names)
    reports = [baseline]
    for num_samples in _evaluation_samples(args, config):
        report = evaluate_model(model, stats, events, num_samples,
                                config.seed, feature_names=names,
                                workers=config.threads)
        report.name = 'model_n{}'.format(num_samples)
        reports.append(report)
    for report in reports:
        report.write_summary(
            os.path.join(args.out, report.name + '_summary.txt'))
        report.write_feature_table(
            os.path.join(args.out, report.name + '_features.tsv'))
    table = compare(reports)
    write_table(table, os.path.join(args.out, 'comparison.tsv'))
    write_table(table)
    return 0


def _load_event(args, schema):
    preprocess = PreprocessKelvins(schema, 1, args.skip_bad_rows)
    events = preprocess(resolve_path(args.event))
    if args.event_id is not None:
        events = [event for event in events
                  if event.event_id == args.event_id]
    if len(events) != 1:
        raise ValueError('Expected one event in {}, found {}'.format(
            args.event, len(events)))
    event = events[0]
    observed = len(event) if args.observed is None else args.observed
    if not (1 <= observed <= len(event)):
        raise ValueError('``--observed`` must be in [1, {}]'.format(
            len(event)))
    return event.cdms[:observed]


def cmd_predict(args):
    config = _load_config(args, samples=args.samples, seed=args.seed)
    checkpoint = load_checkpoint(resolve_path(args.checkpoint))
    schema = checkpoint['schema']
    prefix = _load_event(args, schema)
    predict = PredictNextCDM(checkpoint['model'], checkpoint['stats'],
                             schema, config.samples, config.seed,
                             workers=config.threads)
    inferences = predict(prefix)
    write_table(inferences['summary'], args.save)
    if args.save is not None:
        write_key_values({'prediction': args.save})
    return 0


def cmd_rollout(args):
    config = _load_config(args, samples=args.samples, seed=args.seed,
                          max_steps=args.max_steps)
    checkpoint = load_checkpoint(resolve_path(args.checkpoint))
    schema = checkpoint['schema']
    prefix = _load_event(args, schema)
    predict = RolloutEvent(checkpoint['model'], checkpoint['stats'], schema,
                           config.samples, config.max_steps, config.seed,
                           workers=config.threads)
    result = predict(prefix)
    if args.save is not None:
        result.save(args.save, schema.names)
    write_key_values({'observed': len(prefix), 'steps': result.num_steps,
                      'n_alive': ','.join(map(str, result.num_alive)),
                      'termination': result.termination_reason})
    bands = rollout_bands(result, schema.names)
    time_bands = bands[bands['feature'] == schema.time_feature]
    write_table(time_bands)
    return 0


def cmd_gradcheck(args):
    result = check_gradients(seed=args.seed, corrupt=args.corrupt)
    status = 'PASS' if result.passed else 'FAIL'
    write_key_values({'status': status,
                      'max_relative_error': '{:.12e}'.format(
                          result.max_error),
                      'worst_tensor': result.worst_tensor})
    return 0 if result.passed else 1


def cmd_export_plot(args):
    result = RolloutResult.load(resolve_path(args.rollout))
    names = result.feature_names
    if names is None:
        raise ValueError('Rollout file carries no feature names')
    features = names if args.features is None else args.features
    for feature in features:
        if feature not in names:
            raise SchemaMismatchError(feature, 'Unknown feature')
    if not os.path.exists(args.out):
        os.makedirs(args.out)
    bands = rollout_bands(result, names)
    for feature in features:
        filepath = os.path.join(args.out, feature + '.tsv')
        write_table(bands[bands['feature'] == feature], filepath)
        LOGGER.info('Wrote %s', filepath)
    write_key_values({'files': len(features), 'steps': result.num_steps})
    return 0


def _add_training_flags(parser):
    parser.add_argument('--epochs', type=int)
    parser.add_argument('--batch-size', type=int)
    parser.add_argument('--learning-rate', type=float)
    parser.add_argument('--dropout-rate', type=float)
    parser.add_argument('--hidden', type=int)
    parser.add_argument('--layers', type=int)
    parser.add_argument('--seed', type=int)
    parser.add_argument('--test-fraction', type=float)
    parser.add_argument('--min-length', type=int)
    parser.add_argument('--checkpoint-every', type=int)
    parser.add_argument('--clip-norm', type=float)


def _add_event_flags(parser):
    parser.add_argument('--checkpoint', required=True)
    parser.add_argument('--event', required=True,
                        help='Kelvins-format CSV with the CDMs of one event')
    parser.add_argument('--event-id', default=None,
                        help='Event to use when the CSV holds several')
    parser.add_argument('--observed', type=int, default=None,
                        help='Number of leading CDMs used as prefix')
    parser.add_argument('--samples', type=int)
    parser.add_argument('--seed', type=int)
    parser.add_argument('--skip-bad-rows', action='store_true')


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--threads', type=int, default=None,
                        help='Maximum number of worker threads')
    common.add_argument('--config', default=None,
                        help='Run config of ``key = value`` lines')
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true')
    verbosity.add_argument('-q', '--quiet', action='store_true')

    parser = argparse.ArgumentParser(
        prog='cdmlstm',
        description='Learns and forecasts conjunction event evolution')
    parser.add_argument('--version', action='version', version=__version__)
    commands = parser.add_subparsers(dest='command')
    commands.required = True

    preprocess = commands.add_parser(
        'preprocess', parents=[common], help='Clean a Kelvins CSV')
    preprocess.add_argument('--input', required=True)
    preprocess.add_argument('--schema', default=None,
                            help='Feature schema JSON; defaults to Kelvins')
    preprocess.add_argument('--out', required=True)
    preprocess.add_argument('--min-length', type=int)
    preprocess.add_argument('--skip-bad-rows', action='store_true')
    preprocess.set_defaults(function=cmd_preprocess)

    train = commands.add_parser(
        'train', parents=[common], help='Fit the LSTM to a cleaned dataset')
    train.add_argument('--data', required=True)
    train.add_argument('--out', required=True)
    _add_training_flags(train)
    train.set_defaults(function=cmd_train)

    evaluate = commands.add_parser(
        'evaluate', parents=[common], help='Score model and baseline')
    evaluate.add_argument('--checkpoint', required=True)
    evaluate.add_argument('--data', required=True)
    evaluate.add_argument('--samples', type=int, nargs='+')
    evaluate.add_argument('--seed', type=int)
    evaluate.add_argument('--split', default='test',
                          choices=['train', 'test', 'all'])
    evaluate.add_argument('--test-fraction', type=float)
    evaluate.add_argument('--min-length', type=int)
    evaluate.add_argument('--out', default='evaluation')
    evaluate.set_defaults(function=cmd_evaluate)

    predict = commands.add_parser(
        'predict', parents=[common], help='Predict the next CDM')
    _add_event_flags(predict)
    predict.add_argument('--save', default=None)
    predict.set_defaults(function=cmd_predict)

    rollout = commands.add_parser(
        'rollout', parents=[common], help='Predict the CDMs until TCA')
    _add_event_flags(rollout)
    rollout.add_argument('--max-steps', type=int)
    rollout.add_argument('--save', default=None,
                         help='JSON file used by export-plot')
    rollout.set_defaults(function=cmd_rollout)

    gradcheck = commands.add_parser(
        'gradcheck', parents=[common], help='Check BPTT gradients')
    gradcheck.add_argument('--seed', type=int, default=0)
    gradcheck.add_argument('--corrupt', action='store_true',
                           help=argparse.SUPPRESS)
    gradcheck.set_defaults(function=cmd_gradcheck)

    export_plot = commands.add_parser(
        'export-plot', parents=[common], help='Write rollout band tables')
    export_plot.add_argument('--rollout', required=True)
    export_plot.add_argument('--out', required=True)
    export_plot.add_argument('--features', nargs='+', default=None)
    export_plot.set_defaults(function=cmd_export_plot)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    try:
        return args.function(args)
    except (ValueError, OSError) as error:
        LOGGER.debug('Command failed', exc_info=True)
        sys.stderr.write('cdmlstm {}: error: {}\n'.format(args.command, error))
        return 1


if __name__ == '__main__':
    sys.exit(main())
