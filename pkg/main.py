#!/usr/bin/env python3
"""
2모드 다광자 JCM 시뮬레이션 실행 스크립트
프리셋/설정 파일 시나리오 실행, 검증 스위트, 프리셋 목록 출력을 제공합니다.
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

from tmjcm.numerics import DEFAULT_GRID_COUNT
from tmjcm.scenario_runner import (INVERSION, PHASE_1D, PHASE_2D, PHASE_VARIANCES, PHOTON_VARIANCES,
                                   SNAPSHOT_OBSERVABLES, WIGNER_ORIGIN, Curve, Scenario, ScenarioRunner)
from tmjcm.verification import SUITES, Verifier, load_tolerance_profile
from utils.config_file import ConfigError, parse_config_file
from utils.csv_export import ResultWriter
from utils.presets import UnknownPresetError, get_preset, load_presets

load_dotenv()

# 로깅 설정
logging.basicConfig(
    level=os.getenv('TMJCM_LOG_LEVEL', 'INFO').upper(),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_UNKNOWN_NAME = 2
EXIT_UNWRITABLE = 3
EXIT_BAD_CONFIG = 4

CONFIG_OBSERVABLES = (INVERSION, PHASE_VARIANCES, PHOTON_VARIANCES, WIGNER_ORIGIN)


def parse_snapshots(text: str) -> List[float]:
    """'4.42,6.2999' 형식의 스냅샷 시간 목록을 파싱합니다."""
    try:
        values = [float(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise ConfigError('snapshot', f"숫자가 아닌 값이 있습니다: {text!r}") from None
    if not values:
        raise ConfigError('snapshot', "스냅샷 시간이 비어 있습니다")
    return values


def scenario_from_config(path: str, snapshots: Optional[List[float]]) -> Scenario:
    """
    설정 파일 하나로 단일 곡선 시나리오를 만듭니다.

    Args:
        path (str): key = value 설정 파일 경로
        snapshots (List[float]): 스냅샷 시간 (있으면 위상 분포도 계산)

    Returns:
        Scenario: 'config' 곡선 하나짜리 시나리오
    """
    try:
        run = parse_config_file(path)
    except OSError as e:
        raise ConfigError('config', f"설정 파일을 읽을 수 없습니다: {e}") from e
    observables = CONFIG_OBSERVABLES + ((PHASE_1D, PHASE_2D) if snapshots else ())
    return Scenario(name=Path(path).stem, curves=(Curve(label='config', system=run.system),),
                    observables=observables, t_min=run.t_min, t_max=run.t_max, steps=run.steps,
                    snapshots=tuple(snapshots or ()), description=f"설정 파일 {path}")


def command_run(args: argparse.Namespace) -> int:
    """시나리오를 실행하고 결과를 저장합니다."""
    if (args.preset is None) == (args.config is None):
        logger.error("프리셋 이름과 --config 중 하나만 지정해야 합니다")
        return EXIT_BAD_CONFIG

    snapshots = parse_snapshots(args.snapshot) if args.snapshot else None
    if args.config is not None:
        scenario = scenario_from_config(args.config, snapshots)
    else:
        scenario = get_preset(args.preset)
        if snapshots:
            scenario = scenario.with_snapshots(snapshots)

    if snapshots and not any(o in SNAPSHOT_OBSERVABLES for o in scenario.observables):
        logger.warning(f"[{scenario.name}] 스냅샷 관측량이 없어 --snapshot 이 사용되지 않습니다")

    output_dir = Path(args.out) / scenario.name
    writer = ResultWriter(output_dir)
    runner = ScenarioRunner(grid_count=int(os.getenv('TMJCM_GRID_COUNT', DEFAULT_GRID_COUNT)))
    result = runner.run(scenario)
    summaries = runner.save(result, writer, gnuplot=args.gnuplot)

    print("\n" + "=" * 60)
    print(f"📈 시나리오 실행 결과: {scenario.name} {scenario.figure}".rstrip())
    print("=" * 60)
    for summary in summaries:
        print(f"   {summary.describe()}")
    for note in scenario.notes:
        print(f"   📝 {note}")
    print("\n" + "=" * 60)
    print(f"\n✅ 실행 완료! 결과가 {output_dir} 디렉토리에 저장되었습니다.")
    return EXIT_OK


def command_verify(args: argparse.Namespace) -> int:
    """검증 스위트를 실행합니다."""
    try:
        profile = load_tolerance_profile(args.tol)
    except ValueError as e:
        logger.error(str(e))
        return EXIT_UNKNOWN_NAME

    report = Verifier(profile).run(only=args.only)

    print("\n" + "=" * 60)
    print(f"🔬 검증 결과 (프로필 {report.profile})")
    print("=" * 60)
    for check in report.checks:
        print(f"   {check.describe()}")
    print("\n" + "=" * 60)

    failure = report.first_failure
    if failure is not None:
        print(f"\n❌ 검증 실패: {failure.suite}/{failure.name}")
        return EXIT_FAILURE
    print(f"\n✅ 검사 {len(report.checks)}개 모두 통과")
    return EXIT_OK


def command_list(args: argparse.Namespace) -> int:
    """프리셋 목록을 출력합니다."""
    presets = load_presets()
    print("\n" + "=" * 60)
    print("📋 시나리오 프리셋")
    print("=" * 60)
    for name, scenario in presets.items():
        labels = ', '.join(curve.label for curve in scenario.curves)
        print(f"\n{name} ({scenario.figure})")
        print(f"   {scenario.description}")
        print(f"   곡선: {labels} / 관측량: {', '.join(scenario.observables)}")
    print("\n" + "=" * 60)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='2모드 다광자 Jaynes-Cummings 모델 시뮬레이션')
    subparsers = parser.add_subparsers(dest='command', required=True)

    run_parser = subparsers.add_parser('run', help='프리셋 또는 설정 파일 시나리오 실행')
    run_parser.add_argument('preset', nargs='?', help='프리셋 이름 (예: fig1a)')
    run_parser.add_argument('--config', help='key = value 설정 파일 경로')
    run_parser.add_argument('--out', default=os.getenv('TMJCM_OUTPUT_DIR', 'results'),
                            help='결과 저장 디렉토리 (기본값: results)')
    run_parser.add_argument('--snapshot', help='쉼표로 구분한 스냅샷 시간 (예: 4.42,6.2999,9.32)')
    run_parser.add_argument('--gnuplot', action='store_true', help='gnuplot 스크립트 생성')
    run_parser.set_defaults(handler=command_run)

    verify_parser = subparsers.add_parser('verify', help='검증 스위트 실행')
    verify_parser.add_argument('--only', choices=SUITES, help='하나의 스위트만 실행')
    verify_parser.add_argument('--tol', default='default', help='허용 오차 프로필 (기본값: default)')
    verify_parser.set_defaults(handler=command_verify)

    list_parser = subparsers.add_parser('list', help='프리셋 목록 출력')
    list_parser.set_defaults(handler=command_list)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """메인 함수"""
    args = build_parser().parse_args(argv)

    try:
        return args.handler(args)
    except UnknownPresetError as e:
        logger.error(f"알 수 없는 프리셋: {e.args[0]}")
        return EXIT_UNKNOWN_NAME
    except ConfigError as e:
        logger.error(f"설정 오류 ({e.key}): {e}")
        return EXIT_BAD_CONFIG
    except OSError as e:
        logger.error(f"출력 디렉토리에 쓸 수 없습니다: {e}")
        return EXIT_UNWRITABLE
    except Exception as e:
        logger.error(f"실행 실패: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
