#!/usr/bin/env python3
"""
Drone/Bird classification toolkit - command line front end

Subcommands:
    gen        write a synthetic drone/bird corpus
    train      train a knn, svm or cnn model and save it
    eval       evaluate a saved model on its held-out split
    bench      compare the classifiers and sweep CNN depth/epochs
    gradcheck  verify the CNN gradients by finite differences
    detect     scan a larger frame for drones
    serve      classify uploads over HTTP
"""

import argparse
import os
import sys

# Add module paths
sys.path.append(os.path.join(os.path.dirname(__file__), 'modules'))

from common import AvdbError, setup_logging  # noqa: E402
from config import settings  # noqa: E402
from pipeline import (  # noqa: E402
    cmd_bench,
    cmd_detect,
    cmd_eval,
    cmd_gen,
    cmd_gradcheck,
    cmd_train,
)


def _add_config_args(parser):
    parser.add_argument('--config', help='config file, or inline key=value[,key=value] settings')
    parser.add_argument('--set', dest='overrides', action='append', default=[],
                        metavar='KEY=VALUE', help='override one setting (repeatable)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='avdb',
        description='Drone versus bird image classification (KNN, SVM, CNN)',
    )
    parser.add_argument('--log-level', default=None, help='logging level (default AVDB_LOG_LEVEL)')
    parser.add_argument('--threads', type=int, default=None,
                        help='worker threads, 0 = serial (default AVDB_THREADS)')
    sub = parser.add_subparsers(dest='command', required=True)

    gen = sub.add_parser('gen', help='generate a synthetic corpus')
    gen.add_argument('--out', required=True)
    gen.add_argument('--count', type=int, required=True, help='images per class')
    gen.add_argument('--size', type=int, default=settings.DEFAULT_IMAGE_SIZE)
    gen.add_argument('--seed', type=int, default=settings.DEFAULT_SEED)

    train = sub.add_parser('train', help='train and save a model')
    train.add_argument('--model', required=True, choices=settings.MODEL_KINDS)
    train.add_argument('--data', required=True)
    train.add_argument('--out', required=True, help='model file to write')
    _add_config_args(train)

    ev = sub.add_parser('eval', help='evaluate a saved model on its test split')
    ev.add_argument('--model-file', required=True)
    ev.add_argument('--data', required=True)
    ev.add_argument('--csv', required=True)
    ev.add_argument('--image-size', type=int, default=None,
                    help='preprocess at this size instead of the stored one')

    bench = sub.add_parser('bench', help='run the classifier comparison and CNN sweep')
    bench.add_argument('--data', required=True)
    bench.add_argument('--seeds', type=int, default=1)
    bench.add_argument('--first-seed', type=int, default=settings.DEFAULT_SEED)
    bench.add_argument('--csv', required=True)
    _add_config_args(bench)

    grad = sub.add_parser('gradcheck', help='finite-difference check of the CNN gradients')
    grad.add_argument('--seed', type=int, default=settings.GRADCHECK_SEED)

    det = sub.add_parser('detect', help='sliding-window drone detection in a frame')
    det.add_argument('--model-file', required=True)
    det.add_argument('--image', required=True)
    det.add_argument('--window', type=int, default=None)
    det.add_argument('--stride', type=int, default=None)
    det.add_argument('--all', dest='keep_birds', action='store_true',
                     help='also report windows classified as Bird')

    serve = sub.add_parser('serve', help='serve a model over HTTP')
    serve.add_argument('--model-file', required=True)
    serve.add_argument('--host', default=settings.HOST)
    serve.add_argument('--port', type=int, default=settings.PORT)

    return parser


def cmd_serve(model_file: str, host: str, port: int) -> int:
    from app import DroneBirdApp

    service = DroneBirdApp(model_file)
    print("=" * 70)
    print("                    DRONE / BIRD CLASSIFIER")
    print(f"     model: {service.classifier.summary()}")
    print("=" * 70)
    print(f"\n🚀 Server: http://{host}:{port}")
    print("⏹️  Press Ctrl+C to stop\n")
    try:
        service.run(host=host, port=port)
    except KeyboardInterrupt:
        print("\n\n👋 Server stopped by user")
    return 0


def dispatch(args) -> int:
    if args.command == 'gen':
        return cmd_gen(args.out, args.count, args.size, args.seed, threads=args.threads)
    if args.command == 'train':
        return cmd_train(args.model, args.data, args.out, args.config, args.overrides,
                         threads=args.threads)
    if args.command == 'eval':
        return cmd_eval(args.model_file, args.data, args.csv, args.image_size, threads=args.threads)
    if args.command == 'bench':
        return cmd_bench(args.data, args.seeds, args.csv, args.config, args.overrides,
                         first_seed=args.first_seed, threads=args.threads)
    if args.command == 'gradcheck':
        return cmd_gradcheck(args.seed)
    if args.command == 'detect':
        return cmd_detect(args.model_file, args.image, args.window, args.stride, args.keep_birds)
    return cmd_serve(args.model_file, args.host, args.port)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    try:
        return dispatch(args)
    except AvdbError as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
